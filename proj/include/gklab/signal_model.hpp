#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace gklab {

// Hidden state of nature: the candidate either fits the position (H) or not (L).
enum class State { H, L };

// Candidate private-information structure, parameterized directly in
// subjective-quality space x in [0,1]. Consistency requires
// pdf_H(x)/pdf_L(x) = x/(1-x) on the interior, which makes x itself the
// posterior-odds statistic and gives MLRP for free.
class SignalModel {
 public:
  enum class Family { PolynomialExample, Custom };

  struct ConsistencyReport {
    double max_ratio_error = 0.0;  // worst relative deviation of pdf ratio from x/(1-x)
    int fosd_violations = 0;       // grid points where F_H > F_L
    int positivity_violations = 0; // interior grid points with a non-positive density
    bool ok(double tol = 1e-8) const {
      return max_ratio_error <= tol && fosd_violations == 0 && positivity_violations == 0;
    }
  };

  // The closed-form example pair F_H(x)=x^2, F_L(x)=1-(1-x)^2.
  static SignalModel polynomial_example();

  // Custom model given quality-space cdf/pdf evaluators for both states.
  static SignalModel custom(std::function<double(double)> cdf_h,
                            std::function<double(double)> cdf_l,
                            std::function<double(double)> pdf_h,
                            std::function<double(double)> pdf_l);

  // Loads a Custom model from a JSON file of named piecewise-polynomial
  // cdf coefficients (see README for the schema).
  static SignalModel from_file(const std::string& path);

  Family family() const { return family_; }

  double cdf(State state, double x) const;
  double pdf(State state, double x) const;

  // Inverse cdf. PolynomialExample uses closed forms; Custom bisects to 1e-12.
  double quantile(State state, double u) const;

  ConsistencyReport consistency_check(int grid_points) const;

 private:
  SignalModel() = default;

  Family family_ = Family::PolynomialExample;
  std::function<double(double)> cdf_h_, cdf_l_, pdf_h_, pdf_l_;
};

inline const char* to_string(State s) { return s == State::H ? "H" : "L"; }

}  // namespace gklab
