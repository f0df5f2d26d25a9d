#pragma once

#include "monolab/errors.hpp"
#include "monolab/fit.hpp"
#include "monolab/models.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace monolab {

// ---------------------------------------------------------------------------
// Scattering

/// Transport matrix of (nabla_t - i phi) s = 0 along {w} x [t_from, t_to]:
/// maps coefficients in the frame of chart_from at t_from to coefficients in
/// the frame of chart_to at t_to.
struct ScatteringMatrix {
    cplx w;
    double t_from = 0.0;
    double t_to = 0.0;
    Chart chart_from = Chart::Punctured;
    Chart chart_to = Chart::Punctured;
    Mat matrix;
    double tol = 0.0;  // largest local error estimate accepted by the integrator
};

/// dS/dt = (i phi - A_t) S is integrated in the frame of one chart covering
/// the whole segment, with max step min(0.1, d/4) where d is the distance to
/// the dropped set, and converted to the chart frames at the ends.
ScatteringMatrix scatter(const BundleModel& model, cplx w, double t_from, double t_to, double tol);

struct FlowPoint {
    Point3 point;
    double norm = 0.0;      // |s|_h, may overflow to inf
    double log_norm = 0.0;  // log |s|_h, always finite
};

/// h-norm of the mini-holomorphic extension of s0 (coefficients in the frame
/// of chart_for(t_from, w)) at each of `sample_ts`, ordered from t_from to t_stop.
std::vector<FlowPoint> mini_section_flow(const BundleModel& model, cplx w, double t_from, double t_stop, const Vec& s0,
                                         const std::vector<double>& sample_ts, double tol = 1e-10);

/// Convenience overload sampling n equally spaced t values including t_stop.
std::vector<FlowPoint> mini_section_flow(const BundleModel& model, cplx w, double t_from, double t_stop, const Vec& s0,
                                         int n_samples, double tol = 1e-10);

/// Pole orders as exponents: average log singular values of
/// scatter(model, w, -eps, eps) over circles |w| = r, regressed on log r.
struct ChargeVector {
    std::vector<int> charges;  // sorted ascending
    std::vector<double> raw;   // sorted ascending, pre-rounding
    double spread = 0.0;       // max |raw - rounded|
};

class ExtractionError : public NumericalError {
  public:
    ExtractionError(const std::string& msg, ChargeVector partial) : NumericalError(msg), partial_(std::move(partial)) {}
    const ChargeVector& partial() const noexcept { return partial_; }

  private:
    ChargeVector partial_;
};

ChargeVector scattering_pole_orders(const BundleModel& model, double eps, const std::vector<double>& radii, int n_args,
                                    double tol = 1e-10);

// ---------------------------------------------------------------------------
// Condition (D)

/// Approach direction for the side-s sections (s = -1 or +1): points
/// R (s cos(polar), sin(polar) e^{i w_arg}), polar in [0, pi/2].
struct Ray {
    double polar = 0.0;
    double w_arg = 0.0;
};

std::vector<Ray> default_rays();

/// How the sup-over-rays norm of one basis section behaves as R -> 0.
enum class GrowthClass { polynomial, superpolynomial_decay, superpolynomial_growth, irregular };

const char* growth_class_name(GrowthClass c);

struct SectionGrowth {
    int side = -1;   // -1: section given at t = -eps, +1: at t = +eps
    int index = 0;   // basis vector of the chart frame at t = side*eps
    GrowthFit fit;   // log |s| against log R
    LinearFit inverse_fit;  // log |s| against 1/R
    GrowthClass growth = GrowthClass::irregular;

    bool bounded_polynomially() const {
        return growth == GrowthClass::polynomial || growth == GrowthClass::superpolynomial_decay;
    }
};

struct ConditionDReport {
    std::vector<SectionGrowth> sections;       // the bundle
    std::vector<SectionGrowth> dual_sections;  // the dual bundle
    /// Growth of the h-operator norm of the flow map (the sup over all sections
    /// with unit norm at the start), on the faster-growing side.
    GrowthFit E_exponent;
    GrowthFit dual_exponent;  // the same for the dual
    bool passes = false;
};

GrowthClass classify_growth(const GrowthFit& fit, const LinearFit& inverse_fit);

ConditionDReport condition_D_check(const BundleModel& model, double eps, const std::vector<Ray>& rays,
                                   const std::vector<double>& radii, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Growth of the Higgs field and classification

/// Scalar evaluated at a point in a given chart.
using PointQuantity = std::function<double(const BundleModel&, const Point3&, Chart)>;

/// |phi|_h in the h-operator norm.
double higgs_norm(const BundleModel& model, const Point3& p, Chart chart);

/// Max of `quantity` over sphere_directions(n_samples, seed) scaled to R, each
/// point evaluated in chart_for(point).
double sup_on_sphere(const BundleModel& model, double R, int n_samples, const PointQuantity& quantity,
                     std::uint64_t seed = 42);
double sup_on_sphere(const BundleModel& model, double R, int n_samples, std::uint64_t seed = 42);

enum class Verdict { dirac, not_dirac, inconclusive };

const char* verdict_name(Verdict v);

struct Classification {
    Verdict verdict = Verdict::inconclusive;
    GrowthFit phi_fit;
    std::optional<ConditionDReport> condition_d;
    std::optional<ChargeVector> charges;
    std::string note;  // fit or attachment failures
};

inline constexpr double kDiracTol = 0.05;

/// Verdict from the log-log slope of sup|phi|_h against R:
///   dirac: exponent >= -1 - tol and fit_quality >= 0.99,
///   not_dirac: exponent < -1 - 3 tol, otherwise inconclusive.
/// For a dirac verdict the condition (D) report (eps, default rays) and the
/// extracted charges are attached.
Classification classify_dirac(const BundleModel& model, const std::vector<double>& radii, int n_samples,
                              double tol = kDiracTol, std::uint64_t seed = 42, double eps = 0.5,
                              bool attach = true);

/// Eigenvalues of 2R (-i phi) (h-self-adjoint) per sphere sample, median per
/// radius, extrapolated linearly in R to R = 0 and rounded. Throws
/// ExtractionError when the spread reaches 0.5.
ChargeVector extract_charges(const BundleModel& model, const std::vector<double>& radii, int n_samples,
                             std::uint64_t seed = 42);

// ---------------------------------------------------------------------------
// Asymptotic comparison with the Dirac model sum

struct AsymptoticsReport {
    std::vector<int> charges;
    GrowthFit p1_fit;  // sup |a - id|_h, a = h1^{-1} h in the aligned frame
    double p1_exponent = 0.0;
    double p2_sup = 0.0;                  // sup |phi - phi1|_h
    std::array<double, 3> p3_sup{};       // sup |A_mu - A1_mu|_h for mu = t, w, wbar
    double grad_rphi_sup = 0.0;           // sup |nabla(R phi)|_h
    GrowthFit grad_rphi_fit;
};

/// Per-radius sups below this are treated as zero before fitting.
inline constexpr double kAsymptoticsFloor = 1e-9;

/// Compares the model with the sum of L(k_i) chart by chart after a constant
/// unitary alignment fitted at the outermost radius (the eigenframe of -i phi
/// sorted by eigenvalue, projected to the nearest unitary).
AsymptoticsReport asymptotics_check(const BundleModel& model, const std::vector<int>& charges,
                                    const std::vector<double>& radii, int n_samples, std::uint64_t seed = 42);

}  // namespace monolab
