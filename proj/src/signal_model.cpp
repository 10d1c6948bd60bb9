#include "gklab/signal_model.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <vector>

#include "gklab/numeric.hpp"
#include "json.hpp"

namespace gklab {

namespace {

void require_unit_interval(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error(std::string(what) + " must lie in [0,1]");
}

}  // namespace

SignalModel SignalModel::polynomial_example() {
  SignalModel m;
  m.family_ = Family::PolynomialExample;
  return m;
}

SignalModel SignalModel::custom(std::function<double(double)> cdf_h,
                                std::function<double(double)> cdf_l,
                                std::function<double(double)> pdf_h,
                                std::function<double(double)> pdf_l) {
  SignalModel m;
  m.family_ = Family::Custom;
  m.cdf_h_ = std::move(cdf_h);
  m.cdf_l_ = std::move(cdf_l);
  m.pdf_h_ = std::move(pdf_h);
  m.pdf_l_ = std::move(pdf_l);
  return m;
}

double SignalModel::cdf(State state, double x) const {
  require_unit_interval(x, "quality x");
  if (family_ == Family::PolynomialExample)
    return state == State::H ? x * x : 1.0 - (1.0 - x) * (1.0 - x);
  double v = state == State::H ? cdf_h_(x) : cdf_l_(x);
  if (!std::isfinite(v)) throw std::runtime_error("custom cdf evaluation failed");
  return v;
}

double SignalModel::pdf(State state, double x) const {
  require_unit_interval(x, "quality x");
  if (family_ == Family::PolynomialExample)
    return state == State::H ? 2.0 * x : 2.0 * (1.0 - x);
  double v = state == State::H ? pdf_h_(x) : pdf_l_(x);
  if (!std::isfinite(v)) throw std::runtime_error("custom pdf evaluation failed");
  return v;
}

double SignalModel::quantile(State state, double u) const {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("uniform draw u must lie in (0,1)");
  if (family_ == Family::PolynomialExample)
    return state == State::H ? std::sqrt(u) : 1.0 - std::sqrt(1.0 - u);
  return numeric::bisect([&](double x) { return cdf(state, x) - u; }, 0.0, 1.0, 1e-12, 200);
}

SignalModel::ConsistencyReport SignalModel::consistency_check(int grid_points) const {
  if (grid_points < 2) throw std::invalid_argument("grid_points must be >= 2");
  ConsistencyReport rep;
  for (int i = 1; i <= grid_points; ++i) {
    double x = static_cast<double>(i) / (grid_points + 1);
    double fh = pdf(State::H, x), fl = pdf(State::L, x);
    if (fh <= 1e-12 || fl <= 1e-12) {
      ++rep.positivity_violations;
    } else {
      double target = x / (1.0 - x);
      double err = std::fabs(fh / fl - target) / std::max(target, 1e-300);
      rep.max_ratio_error = std::max(rep.max_ratio_error, err);
    }
    if (cdf(State::H, x) > cdf(State::L, x) + 1e-12) ++rep.fosd_violations;
  }
  return rep;
}

SignalModel SignalModel::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open signal model file: " + path);
  nlohmann::json j;
  in >> j;

  struct Piecewise {
    std::vector<double> breaks;                 // ascending, first 0, last 1
    std::vector<std::vector<double>> coeffs;    // one polynomial per piece
    double eval(double x) const {
      std::size_t k = 0;
      while (k + 2 < breaks.size() && x >= breaks[k + 1]) ++k;
      double acc = 0.0, pw = 1.0;
      for (double c : coeffs[k]) {
        acc += c * pw;
        pw *= x;
      }
      return acc;
    }
    double deriv(double x) const {
      std::size_t k = 0;
      while (k + 2 < breaks.size() && x >= breaks[k + 1]) ++k;
      double acc = 0.0, pw = 1.0;
      for (std::size_t n = 1; n < coeffs[k].size(); ++n) {
        acc += static_cast<double>(n) * coeffs[k][n] * pw;
        pw *= x;
      }
      return acc;
    }
  };

  auto parse = [&](const char* key) {
    Piecewise p;
    const auto& spec = j.at(key);
    p.breaks = spec.at("breakpoints").get<std::vector<double>>();
    p.coeffs = spec.at("coefficients").get<std::vector<std::vector<double>>>();
    if (p.breaks.size() < 2 || p.coeffs.size() + 1 != p.breaks.size())
      throw std::runtime_error(std::string("malformed piecewise polynomial: ") + key);
    return p;
  };

  auto h = std::make_shared<Piecewise>(parse("cdf_H"));
  auto l = std::make_shared<Piecewise>(parse("cdf_L"));
  return custom([h](double x) { return h->eval(x); },
                [l](double x) { return l->eval(x); },
                [h](double x) { return h->deriv(x); },
                [l](double x) { return l->deriv(x); });
}

}  // namespace gklab
