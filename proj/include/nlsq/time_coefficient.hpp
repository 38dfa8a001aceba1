#pragma once

// Scalar coefficient of time: Omega_j(t) of the quadratic potential, the
// electric field components E_j(t), and the coupling profiles h(t), H(t).

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlsq/errors.hpp"

namespace nlsq {

class TimeCoefficient {
  public:
    enum class Kind { Constant, Table, Named };

    TimeCoefficient() : TimeCoefficient(constant(0.0)) {}

    static TimeCoefficient constant(double value);
    // Cubic spline with not-a-knot ends; times strictly increasing.
    // Evaluation outside [times.front(), times.back()] is an error.
    static TimeCoefficient table(std::vector<double> times, std::vector<double> values);
    // Deterministic analytic profiles: "pulsed", "double_exponential", "cosine".
    static TimeCoefficient named(const std::string& id,
                                 std::map<std::string, double> params = {});

    double operator()(double t) const { return value(t); }
    double value(double t) const;
    double derivative(double t) const;

    Kind kind() const { return kind_; }
    const std::string& profile_id() const { return id_; }
    bool is_zero() const;  // exact structural zero (constant 0)

    nlohmann::json to_json() const;
    static TimeCoefficient from_json(const nlohmann::json& j);

  private:
    TimeCoefficient(Kind k) : kind_(k) {}

    Kind kind_;
    double const_value_ = 0.0;
    // table data + spline coefficients (per interval: value a,b,c,d)
    std::vector<double> times_, values_, b_, c_, d_;
    std::string id_;
    std::map<std::string, double> params_;
};

}  // namespace nlsq
