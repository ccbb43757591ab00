#include "nbc/corpus.hpp"

#include <cmath>
#include <cstdio>

#include "nbc/minkowski.hpp"

namespace nbc {

namespace {

std::string short_real(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%g", x);
  return buffer;
}

CurveSpec make_spec(std::string name, std::map<std::string, double> constants,
                    std::array<std::string, 4> components,
                    Parametrization parametrization, Interval domain) {
  CurveSpec spec;
  spec.name = std::move(name);
  spec.constants = std::move(constants);
  spec.components = std::move(components);
  for (int i = 0; i < 4; ++i)
    spec.parsed[static_cast<std::size_t>(i)] =
        parse(spec.components[static_cast<std::size_t>(i)]);
  spec.parametrization = parametrization;
  spec.domain = domain;
  return spec;
}

constexpr double kBaseLo = -2.0;
constexpr double kBaseHi = 2.0;

}  // namespace

void validate_params(const ExampleParams& p) {
  if (p.a == 0.0 || p.b == 0.0)
    throw_error(ErrorCode::invalid_params,
                "example family needs nonzero constants a and b");
  if (std::abs(p.a) == std::abs(p.b))
    throw_error(ErrorCode::invalid_params,
                "example family needs |a| != |b| (got a = " + short_real(p.a) +
                    ", b = " + short_real(p.b) + ")");
}

CurveSpec example_curve(const ExampleParams& p) {
  validate_params(p);
  return make_spec(
      "null_helix_a" + short_real(p.a) + "_b" + short_real(p.b),
      {{"a", p.a}, {"b", p.b}},
      {"(1/sqrt(a^2+b^2))*(1/a)*sinh(a*s)", "(1/sqrt(a^2+b^2))*(1/a)*cosh(a*s)",
       "(1/sqrt(a^2+b^2))*(1/b)*sin(b*s)", "(1/sqrt(a^2+b^2))*(1/b)*cos(b*s)"},
      Parametrization::pseudo_arc, {kBaseLo, kBaseHi});
}

CurveSpec scaled_example(const ExampleParams& p, double lam) {
  validate_params(p);
  if (!(lam > 0.0))
    throw_error(ErrorCode::invalid_params, "scale factor lam must be positive");
  return make_spec("null_helix_a" + short_real(p.a) + "_b" + short_real(p.b) +
                       "_scaled" + short_real(lam),
                   {{"a", p.a}, {"b", p.b}, {"lam", lam}},
                   {"(1/sqrt(a^2+b^2))*(1/a)*sinh(a*lam*s)",
                    "(1/sqrt(a^2+b^2))*(1/a)*cosh(a*lam*s)",
                    "(1/sqrt(a^2+b^2))*(1/b)*sin(b*lam*s)",
                    "(1/sqrt(a^2+b^2))*(1/b)*cos(b*lam*s)"},
                   Parametrization::general, {kBaseLo / lam, kBaseHi / lam});
}

CartanFrame closed_form_frame(const ExampleParams& p, double s) {
  validate_params(p);
  double a = p.a, b = p.b;
  double r = std::sqrt(a * a + b * b);
  double ch = std::cosh(a * s), sh = std::sinh(a * s);
  double cb = std::cos(b * s), sb = std::sin(b * s);

  CartanFrame f;
  f.s = s;
  f.k1 = (b * b - a * a) / 2.0;
  f.k2 = -std::abs(a * b);
  f.k1_prime = 0.0;
  f.L = {{ch / r, sh / r, cb / r, -sb / r}};
  f.W1 = {{a * sh / r, a * ch / r, -b * sb / r, -b * cb / r}};
  f.N = {{-r * ch / 2.0, -r * sh / 2.0, r * cb / 2.0, -r * sb / 2.0}};
  double sign = (a * b > 0.0) ? 1.0 : -1.0;
  f.W2 = {{sign * b * sh / r, sign * b * ch / r, sign * a * sb / r,
           sign * a * cb / r}};
  f.orientation_det = det4(f.L, f.N, f.W1, f.W2);
  f.gram_residual = gram_residual(f.L, f.N, f.W1, f.W2);
  f.frenet_residual = 0.0;
  return f;
}

ExpectedMate expected_mate(const ExampleParams& p, BertrandCase which) {
  validate_params(p);
  double a = p.a, b = p.b;

  ExpectedMate out;
  if (which == BertrandCase::case_one) {
    out.slope = std::sqrt(2.0);
    out.alpha = 0.0;
    out.beta = 1.0 / std::abs(a * b);
    out.spec = make_spec(
        "null_helix_a" + short_real(a) + "_b" + short_real(b) + "_mate1",
        {{"a", a}, {"b", b}, {"l0", out.slope}},
        {"(2/sqrt(a^2+b^2))*(1/a)*sinh(a*s/l0)",
         "(2/sqrt(a^2+b^2))*(1/a)*cosh(a*s/l0)",
         "(2/sqrt(a^2+b^2))*(1/b)*sin(b*s/l0)",
         "(2/sqrt(a^2+b^2))*(1/b)*cos(b*s/l0)"},
        Parametrization::pseudo_arc,
        {out.slope * kBaseLo, out.slope * kBaseHi});
    return out;
  }
  if (which == BertrandCase::case_two) {
    if (!(b * b > a * a))
      throw_error(ErrorCode::invalid_params,
                  "closed-form case-II mate needs b^2 > a^2 (correspondence "
                  "slope would not be real)");
    out.slope = std::sqrt((a * a + b * b) / (2.0 * (b * b - a * a)));
    out.alpha = 1.0 / (b * b - a * a);
    out.beta = -1.0 / (2.0 * std::abs(a * b));
    out.spec = make_spec(
        "null_helix_a" + short_real(a) + "_b" + short_real(b) + "_mate2",
        {{"a", a}, {"b", b}, {"l0", out.slope}},
        {"(sqrt(a^2+b^2)/(2*(b^2-a^2)))*(1/a)*sinh(a*s/l0)",
         "(sqrt(a^2+b^2)/(2*(b^2-a^2)))*(1/a)*cosh(a*s/l0)",
         "-(sqrt(a^2+b^2)/(2*(b^2-a^2)))*(1/b)*sin(b*s/l0)",
         "-(sqrt(a^2+b^2)/(2*(b^2-a^2)))*(1/b)*cos(b*s/l0)"},
        Parametrization::pseudo_arc,
        {out.slope * kBaseLo, out.slope * kBaseHi});
    return out;
  }
  throw_error(ErrorCode::invalid_argument,
              "expected_mate needs case I or case II");
}

const std::vector<ExampleParams>& default_corpus() {
  static const std::vector<ExampleParams> params = {
      {1.0, 2.0}, {1.0, 3.0}, {2.0, 5.0}};
  return params;
}

}  // namespace nbc
