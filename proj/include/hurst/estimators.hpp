#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace hurst {

enum class Method { RRA, FA1, FA2, FA3, GPH, Robinson, Pickands, Hill, HR };

inline constexpr Method kAllMethods[] = {Method::RRA,      Method::FA1,      Method::FA2,
                                         Method::FA3,      Method::GPH,      Method::Robinson,
                                         Method::Pickands, Method::Hill,     Method::HR};

/// Lower-case CLI tag: rra, fa1, ..., hr.
std::string method_tag(Method m);
/// Display label: RRA, FA1, ..., HR.
std::string method_label(Method m);
Method parse_method(const std::string& tag);

/// True for GPH/Robinson, whose point value is d rather than H.
bool estimates_d(Method m);

struct PointEstimate {
  Method method = Method::RRA;
  double value = 0.0;  // H or d
  double intercept = 0.0;
  std::size_t n_points = 0;
};

PointEstimate estimate(Method method, std::span<const double> r);

}  // namespace hurst
