#include "optstop/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace optstop {

const char* family_name(Family f) {
  switch (f) {
    case Family::BrownianDrift: return "BrownianDrift";
    case Family::KouJumpDiffusion: return "KouJumpDiffusion";
    case Family::CompoundPoissonDrift: return "CompoundPoissonDrift";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "BrownianDrift") return Family::BrownianDrift;
  if (name == "KouJumpDiffusion") return Family::KouJumpDiffusion;
  if (name == "CompoundPoissonDrift") return Family::CompoundPoissonDrift;
  throw std::invalid_argument("unknown model family: " + name);
}

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(std::string("ModelSpec: ") + msg);
}

}  // namespace

void ModelSpec::validate() const {
  for (double v : {mu, sigma, lambda_down, eta_down, lambda_up, eta_up, r, m, c})
    require(std::isfinite(v), "all parameters must be finite");
  require(r > 0.0, "r must be > 0");
  require(c > 0.0, "c must be > 0");
  require(r > m, "r must exceed m");
  require(sigma >= 0.0, "sigma must be >= 0");
  require(lambda_down >= 0.0 && lambda_up >= 0.0, "jump intensities must be >= 0");
  if (lambda_down > 0.0) require(eta_down > 0.0, "eta_down must be > 0");
  if (lambda_up > 0.0) require(eta_up > 1.0, "eta_up must exceed 1 (E e^{X_1} finite)");

  switch (family) {
    case Family::BrownianDrift:
      require(sigma > 0.0, "BrownianDrift needs sigma > 0");
      require(lambda_down == 0.0 && lambda_up == 0.0, "BrownianDrift has no jumps");
      break;
    case Family::KouJumpDiffusion:
      require(sigma > 0.0, "KouJumpDiffusion needs sigma > 0");
      require(lambda_down > 0.0 || lambda_up > 0.0, "KouJumpDiffusion needs jumps");
      break;
    case Family::CompoundPoissonDrift:
      require(sigma == 0.0, "CompoundPoissonDrift is pure jump (sigma = 0)");
      require(mu > 0.0, "CompoundPoissonDrift needs mu > 0");
      require(lambda_down > 0.0, "CompoundPoissonDrift needs lambda_down > 0");
      require(lambda_up == 0.0, "CompoundPoissonDrift is spectrally negative");
      // With mu - m >= 0 the drift-adjusted path moves up between jumps, so
      // downward passage happens at jump times only and G is genuinely
      // discontinuous at 0.
      require(mu - m >= 0.0, "CompoundPoissonDrift needs mu - m >= 0");
      break;
  }
}

ModelSpec ModelSpec::brownian(double mu, double sigma, double r, double m, double c) {
  ModelSpec s;
  s.family = Family::BrownianDrift;
  s.mu = mu;
  s.sigma = sigma;
  s.r = r;
  s.m = m;
  s.c = c;
  s.validate();
  return s;
}

ModelSpec ModelSpec::kou(double mu, double sigma, double lambda_down, double eta_down,
                         double lambda_up, double eta_up, double r, double m, double c) {
  ModelSpec s;
  s.family = Family::KouJumpDiffusion;
  s.mu = mu;
  s.sigma = sigma;
  s.lambda_down = lambda_down;
  s.eta_down = eta_down;
  s.lambda_up = lambda_up;
  s.eta_up = eta_up;
  s.r = r;
  s.m = m;
  s.c = c;
  s.validate();
  return s;
}

ModelSpec ModelSpec::compound_poisson(double mu, double lambda_down, double eta_down,
                                      double r, double m, double c) {
  ModelSpec s;
  s.family = Family::CompoundPoissonDrift;
  s.mu = mu;
  s.lambda_down = lambda_down;
  s.eta_down = eta_down;
  s.r = r;
  s.m = m;
  s.c = c;
  s.validate();
  return s;
}

double levy_exponent(const ModelSpec& model, double theta) {
  if (model.lambda_up > 0.0 && theta >= model.eta_up)
    throw std::domain_error("levy_exponent: theta >= eta_up");
  if (model.lambda_down > 0.0 && theta <= -model.eta_down)
    throw std::domain_error("levy_exponent: theta <= -eta_down");
  double psi = model.mu * theta + 0.5 * model.sigma * model.sigma * theta * theta;
  if (model.lambda_down > 0.0)
    psi += model.lambda_down * (model.eta_down / (model.eta_down + theta) - 1.0);
  if (model.lambda_up > 0.0)
    psi += model.lambda_up * (model.eta_up / (model.eta_up - theta) - 1.0);
  return psi;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "FAIL";
    case Verdict::RemarkMode: return "remark-mode";
  }
  return "?";
}

bool AssumptionReport::admissible() const {
  return right_continuity == Verdict::Pass && class_d != Verdict::Fail &&
         vanishing_discounted_mean == Verdict::Pass && full_support != Verdict::Fail;
}

std::string AssumptionReport::first_failure() const {
  if (right_continuity == Verdict::Fail) return "A1";
  if (class_d == Verdict::Fail) return "A2";
  if (vanishing_discounted_mean == Verdict::Fail) return "A3";
  if (full_support == Verdict::Fail) return "A4";
  return {};
}

std::string AssumptionReport::summary() const {
  std::ostringstream os;
  os << "A1 right-continuity: " << verdict_name(right_continuity) << "\n"
     << "A2 class D: " << verdict_name(class_d) << " (psi(1) = " << psi_one
     << ", margin r - psi(1) = " << margin << ")\n"
     << "A3 vanishing discounted mean: " << verdict_name(vanishing_discounted_mean) << "\n"
     << "A4 full support: " << verdict_name(full_support);
  if (full_support == Verdict::RemarkMode)
    os << " (spectrally negative, support bounded above on compacts)";
  return os.str();
}

AssumptionReport check_assumptions(const ModelSpec& model) {
  model.validate();
  AssumptionReport rep;
  rep.right_continuity = Verdict::Pass;  // cadlag paths for every family here

  rep.psi_one = levy_exponent(model, 1.0);
  rep.margin = model.r - rep.psi_one;
  // Boundary case psi(1) == r is accepted: the transforms only need q > 0.
  const Verdict moment = rep.margin >= 0.0 ? Verdict::Pass : Verdict::Fail;
  rep.class_d = moment;
  rep.vanishing_discounted_mean = moment;

  const bool both_directions = model.sigma > 0.0 || (model.lambda_down > 0.0 && model.lambda_up > 0.0);
  if (both_directions) {
    rep.full_support = Verdict::Pass;
  } else if (model.sigma == 0.0 && model.lambda_down > 0.0 && model.lambda_up == 0.0) {
    rep.full_support = Verdict::RemarkMode;
  } else {
    rep.full_support = Verdict::Fail;
  }
  return rep;
}

AssumptionReport require_admissible(const ModelSpec& model) {
  AssumptionReport rep = check_assumptions(model);
  if (!rep.admissible()) {
    const std::string which = rep.first_failure();
    throw AssumptionError(which, "model fails assumption " + which);
  }
  return rep;
}

bool is_downward_regular(const ModelSpec& model) { return model.sigma > 0.0; }

}  // namespace optstop
