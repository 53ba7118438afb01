#include "qcoord/families.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qcoord/sampling.hpp"

namespace qcoord {

namespace {

// Fixed-point text without exponent or trailing zeros; never "-0".
std::string decimal(double v, int places) {
  const double scale = std::pow(10.0, places);
  double r = std::round(v * scale) / scale;
  if (r == 0) r = 0;
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, r, std::chars_format::fixed, places);
  if (ec != std::errc()) throw std::runtime_error("cannot format coefficient");
  std::string s(buf, end);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  return s;
}

double rounded(double v, int places) {
  const double scale = std::pow(10.0, places);
  return std::round(v * scale) / scale;
}

class SumBuilder {
 public:
  void add(double coef, const std::string& body, int places) {
    const double c = rounded(coef, places);
    if (c == 0) return;
    const std::string mag = decimal(std::fabs(c), places);
    std::string term = body.empty() ? mag : (mag == "1" ? body : mag + "*" + body);
    if (text_.empty()) {
      text_ = c < 0 ? "-" + term : term;
    } else {
      text_ += (c < 0 ? " - " : " + ") + term;
    }
  }
  std::string str() const { return text_.empty() ? "0" : text_; }

 private:
  std::string text_;
};

void ridge(SumBuilder& out, Rng& rng, int knots, const Domain& domain) {
  std::string u;
  double lo, hi;
  if (const auto* iv = std::get_if<Interval>(&domain)) {
    u = "x";
    lo = iv->lo();
    hi = iv->hi();
  } else {
    const Box2& box = std::get<Box2>(domain);
    const double angle = rng.uniform(0, 2 * std::numbers::pi);
    double c = rounded(std::cos(angle), 4), s = rounded(std::sin(angle), 4);
    if (c == 0 && s == 0) c = 1;
    SumBuilder dir;
    dir.add(c, "x", 4);
    dir.add(s, "y", 4);
    u = "(" + dir.str() + ")";
    const double xs[2] = {box.x.lo(), box.x.hi()};
    const double ys[2] = {box.y.lo(), box.y.hi()};
    lo = hi = c * xs[0] + s * ys[0];
    for (double x : xs) {
      for (double y : ys) {
        lo = std::min(lo, c * x + s * y);
        hi = std::max(hi, c * x + s * y);
      }
    }
  }

  std::vector<double> nodes{lo, hi};
  for (int k = 2; k < knots; ++k) nodes.push_back(rounded(rng.uniform(lo, hi), 4));
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::vector<double> values;
  for (std::size_t i = 0; i < nodes.size(); ++i) values.push_back(rounded(rng.normal(), 3));

  std::vector<double> slopes;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    slopes.push_back((values[i + 1] - values[i]) / (nodes[i + 1] - nodes[i]));
  }
  // g(u) = a + b u + sum c_i |u - k_i| over the interior nodes.
  const double b = (slopes.front() + slopes.back()) / 2;
  double a = values.front() - b * nodes.front();
  std::vector<double> kinks;
  for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
    const double ci = (slopes[i] - slopes[i - 1]) / 2;
    kinks.push_back(ci);
    a -= ci * (nodes[i] - nodes.front());
  }
  out.add(a, "", 6);
  out.add(b, u, 6);
  for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
    const double k = nodes[i];
    std::string shifted = u + (k < 0 ? " + " : " - ") + decimal(std::fabs(k), 4);
    if (rounded(k, 4) == 0) shifted = u;
    out.add(kinks[i - 1], "abs(" + shifted + ")", 6);
  }
}

std::string polynomial(Rng& rng, int degree, int arity) {
  SumBuilder out;
  auto power = [](const char* v, int e) -> std::string {
    if (e == 0) return "";
    if (e == 1) return v;
    return std::string(v) + "^" + std::to_string(e);
  };
  for (int total = 0; total <= degree; ++total) {
    for (int i = total; i >= 0; --i) {
      const int j = total - i;
      if (arity == 1 && j > 0) continue;
      std::string body = power("x", i);
      const std::string py = power("y", j);
      if (!py.empty()) body = body.empty() ? py : body + "*" + py;
      out.add(rng.normal(), body, 3);
    }
  }
  return out.str();
}

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

std::string to_string(const FunctionFamily& family) {
  if (const auto* p = std::get_if<PiecewiseLinear>(&family)) {
    std::string s = "pwl" + std::to_string(p->knots);
    if (p->ridges != 1) s += "x" + std::to_string(p->ridges);
    return s;
  }
  return "poly" + std::to_string(std::get<PolynomialBasis>(family).degree);
}

std::optional<FunctionFamily> family_from_string(std::string_view text) {
  if (text.rfind("pwl", 0) == 0) {
    std::string_view rest = text.substr(3);
    PiecewiseLinear p;
    const auto cross = rest.find('x');
    if (!parse_int(rest.substr(0, cross), p.knots)) return std::nullopt;
    if (cross != std::string_view::npos && !parse_int(rest.substr(cross + 1), p.ridges)) {
      return std::nullopt;
    }
    if (p.knots < 2 || p.knots > 64 || p.ridges < 1 || p.ridges > 8) return std::nullopt;
    return p;
  }
  if (text.rfind("poly", 0) == 0) {
    PolynomialBasis p;
    if (!parse_int(text.substr(4), p.degree) || p.degree < 0 || p.degree > 12) {
      return std::nullopt;
    }
    return p;
  }
  return std::nullopt;
}

std::string sample_function(const FunctionFamily& family, const Domain& domain,
                            std::uint64_t seed, std::uint64_t trial) {
  Rng rng(splitmix64(splitmix64(seed) + trial));
  if (const auto* p = std::get_if<PolynomialBasis>(&family)) {
    return polynomial(rng, p->degree, arity_of(domain));
  }
  const auto& pwl = std::get<PiecewiseLinear>(family);
  SumBuilder out;
  const int ridges = arity_of(domain) == 1 ? 1 : pwl.ridges;
  for (int r = 0; r < ridges; ++r) ridge(out, rng, pwl.knots, domain);
  return out.str();
}

}  // namespace qcoord
