#include "hurst/estimators.hpp"

#include <algorithm>
#include <cctype>

#include "hurst/errors.hpp"
#include "hurst/scaling.hpp"
#include "hurst/spectral_tail.hpp"

namespace hurst {

std::string method_tag(Method m) {
  switch (m) {
    case Method::RRA: return "rra";
    case Method::FA1: return "fa1";
    case Method::FA2: return "fa2";
    case Method::FA3: return "fa3";
    case Method::GPH: return "gph";
    case Method::Robinson: return "robinson";
    case Method::Pickands: return "pickands";
    case Method::Hill: return "hill";
    case Method::HR: return "hr";
  }
  return "unknown";
}

std::string method_label(Method m) {
  switch (m) {
    case Method::RRA: return "RRA";
    case Method::FA1: return "FA1";
    case Method::FA2: return "FA2";
    case Method::FA3: return "FA3";
    case Method::GPH: return "GPH";
    case Method::Robinson: return "Robinson";
    case Method::Pickands: return "Pickands";
    case Method::Hill: return "Hill";
    case Method::HR: return "HR";
  }
  return "unknown";
}

Method parse_method(const std::string& tag) {
  std::string s(tag);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (Method m : kAllMethods) {
    if (method_tag(m) == s) return m;
  }
  throw Error(Errc::BadArgument,
              "unknown method '" + tag + "' (rra|fa1|fa2|fa3|gph|robinson|pickands|hill|hr)");
}

bool estimates_d(Method m) { return m == Method::GPH || m == Method::Robinson; }

PointEstimate estimate(Method method, std::span<const double> r) {
  PointEstimate out;
  out.method = method;
  auto from_h = [&](const HurstEstimate& e) {
    out.value = e.H;
    out.intercept = e.intercept;
    out.n_points = e.n_points;
  };
  auto from_d = [&](const DEstimate& e) {
    out.value = e.d;
    out.intercept = e.intercept;
    out.n_points = e.m;
  };
  switch (method) {
    case Method::RRA: from_h(estimate_rra(r)); break;
    case Method::FA1: from_h(estimate_fa(r, QGrid::fa1())); break;
    case Method::FA2: from_h(estimate_fa(r, QGrid::fa2())); break;
    case Method::FA3: from_h(estimate_fa(r, QGrid::fa3())); break;
    case Method::GPH: from_d(estimate_gph(r)); break;
    case Method::Robinson: from_d(estimate_robinson(r)); break;
    case Method::Pickands: from_h(estimate_tail(r, TailMethod::Pickands)); break;
    case Method::Hill: from_h(estimate_tail(r, TailMethod::Hill)); break;
    case Method::HR: from_h(estimate_tail(r, TailMethod::HR)); break;
  }
  return out;
}

}  // namespace hurst
