#pragma once

#include <stdexcept>
#include <string>

namespace optstop {

enum class Family { BrownianDrift, KouJumpDiffusion, CompoundPoissonDrift };

const char* family_name(Family f);
Family family_from_name(const std::string& name);  // throws std::invalid_argument

// An exponential Levy-type model V = v e^X together with the problem
// constants. X has Levy exponent
//   psi(theta) = mu*theta + sigma^2 theta^2 / 2
//              + lambda_down (eta_down/(eta_down+theta) - 1)
//              + lambda_up   (eta_up/(eta_up-theta) - 1).
// The solver works on the drift-adjusted process Xbar_t = -mt + X_t and the
// effective discount q = r - m.
struct ModelSpec {
  Family family = Family::BrownianDrift;
  double mu = 0.0;
  double sigma = 0.0;
  double lambda_down = 0.0;
  double eta_down = 1.0;
  double lambda_up = 0.0;
  double eta_up = 2.0;
  double r = 0.05;   // discount rate, > 0
  double m = 0.0;    // boundary growth rate, < r
  double c = 1.0;    // reward constant, > 0

  double q() const { return r - m; }
  double drift_adjusted_mu() const { return mu - m; }
  double total_jump_rate() const { return lambda_down + lambda_up; }
  bool has_jumps() const { return lambda_down > 0.0 || lambda_up > 0.0; }

  // Structural validation (family shape, positivity, r > m, finite inputs).
  // Assumptions 2-4 are reported by check_assumptions, not enforced here.
  void validate() const;

  static ModelSpec brownian(double mu, double sigma, double r, double m, double c);
  static ModelSpec kou(double mu, double sigma, double lambda_down, double eta_down,
                       double lambda_up, double eta_up, double r, double m, double c);
  static ModelSpec compound_poisson(double mu, double lambda_down, double eta_down,
                                    double r, double m, double c);
};

// psi(theta); throws std::domain_error outside the finite-moment strip
// (-eta_down, eta_up).
double levy_exponent(const ModelSpec& model, double theta);

enum class Verdict { Pass, Fail, RemarkMode };
const char* verdict_name(Verdict v);

struct AssumptionReport {
  Verdict right_continuity = Verdict::Pass;  // A1, structural for these families
  Verdict class_d = Verdict::Pass;           // A2, psi(1) < r for these families
  Verdict vanishing_discounted_mean = Verdict::Pass;  // A3, inf_t e^{-rt} E e^{X_t} = 0
  Verdict full_support = Verdict::Pass;      // A4, or RemarkMode for spectrally
                                             // negative pure-jump models
  double psi_one = 0.0;
  double margin = 0.0;  // r - psi(1)

  bool admissible() const;  // all pass, RemarkMode allowed on A4
  bool remark_mode() const { return full_support == Verdict::RemarkMode; }
  // Name of the first failing assumption ("A2", "A3", "A4"), empty if none.
  std::string first_failure() const;
  std::string summary() const;
};

AssumptionReport check_assumptions(const ModelSpec& model);

// Raised when an estimator or solver refuses a model whose assumption report
// is failing. `assumption` names the first failure ("A2", "A3", "A4").
struct AssumptionError : std::runtime_error {
  std::string assumption;
  AssumptionError(std::string which, const std::string& what)
      : std::runtime_error(what), assumption(std::move(which)) {}
};

// check_assumptions + throw AssumptionError unless admissible.
AssumptionReport require_admissible(const ModelSpec& model);

// True iff Xbar enters (-inf, 0) immediately, i.e. the downward passage is
// diffusive and G is continuous at 0. For the implemented families this is
// exactly sigma > 0; it selects the smooth-pasting characterization over the
// continuous-pasting one.
bool is_downward_regular(const ModelSpec& model);

}  // namespace optstop
