#pragma once

#include "monolab/geometry.hpp"
#include "monolab/linalg.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace monolab {

/// Coordinate charts of the punctured domain:
///   Plus  = A+ (drops the half-line {w = 0, t <= 0}),
///   Minus = A- (drops the half-line {w = 0, t >= 0}),
///   Punctured = U* (drops the origin only).
enum class Chart { Plus, Minus, Punctured };

const char* chart_name(Chart c);

/// A chart set is either {Punctured} or {Plus, Minus}.
enum class ChartSet { Punctured, PlusMinus };

bool chart_set_has(ChartSet s, Chart c);

/// Distance from p to the complement of the chart (the dropped half-line, or
/// the origin for U*).
double chart_boundary_distance(Chart c, const Point3& p);

bool chart_contains(Chart c, const Point3& p);

/// H with its first derivatives in a mini-holomorphic frame. d_wbar H = (d_w H)^*.
struct MetricJet {
    Mat H;
    Mat dH_t;
    Mat dH_w;
};

/// Connection, Higgs field and metric at a point in a declared frame:
///   nabla v = v (A_t dt + A_w dw + A_wbar dwbar),  phi acts as v -> v phi.
struct FrameData {
    Chart chart = Chart::Punctured;
    Mat h;
    Mat A_t;
    Mat A_w;
    Mat A_wbar;
    Mat phi;

    Eigen::Index rank() const { return h.rows(); }
    Mat A_x() const { return A_w + A_wbar; }
    Mat A_y() const { return I * (A_w - A_wbar); }
};

using MetricFunction = std::function<Mat(const Point3&)>;

/// Relative step of the finite-difference fallback: h_step = eta * R(p).
inline constexpr double kJetStepEta = 1e-4;

/// Central-difference jet of H with step eta * R(p).
MetricJet finite_difference_jet(const MetricFunction& H, const Point3& p, double eta = kJetStepEta);

/// Unitary connection and Higgs field of a metric given in a mini-holomorphic
/// frame: A_t = H^{-1} d_t H / 2, A_w = H^{-1} d_w H, A_wbar = 0,
/// phi = -(i/2) H^{-1} d_t H.
FrameData frame_calculus(const MetricJet& jet, Chart chart = Chart::Punctured, const Point3* where = nullptr);

/// Overload for a bare metric function; derivatives by central differences.
FrameData frame_calculus(const MetricFunction& H, const Point3& p, Chart chart = Chart::Punctured);

/// A rank-r Hermitian bundle with a frame per chart. Evaluation is lazy and
/// pure; instances are immutable and shared through ModelPtr.
class BundleModel {
  public:
    virtual ~BundleModel() = default;

    virtual int rank() const = 0;
    virtual ChartSet charts() const = 0;
    virtual std::string label() const = 0;

    /// True when every chart frame is mini-holomorphic, so the frame calculus
    /// applies to the metric.
    virtual bool mini_frame() const { return true; }
    /// True when metric derivatives come in closed form.
    virtual bool closed_form() const { return true; }

    Mat metric(const Point3& p, Chart c) const;
    MetricJet jet(const Point3& p, Chart c) const;
    FrameData frame_data(const Point3& p, Chart c) const;
    FrameData frame_data(const Point3& p) const { return frame_data(p, chart_for(p)); }

    /// Matrix M with xi_to = M xi_from for coefficient vectors of one section.
    Mat transition(const Point3& p, Chart from, Chart to) const;

    bool has_chart(Chart c) const { return chart_set_has(charts(), c); }
    /// The chart whose dropped set is farthest from p.
    Chart chart_for(const Point3& p) const;
    void require_chart(const Point3& p, Chart c) const;

  protected:
    virtual Mat do_metric(const Point3& p, Chart c) const = 0;
    virtual MetricJet do_jet(const Point3& p, Chart c) const;
    virtual FrameData do_frame_data(const Point3& p, Chart c) const;
    /// T with xi_plus = T xi_minus, i.e. sigma_minus = sigma_plus T. Only
    /// called on PlusMinus models.
    virtual Mat plus_from_minus(const Point3& p) const;
};

using ModelPtr = std::shared_ptr<const BundleModel>;

/// Real polynomial in (t, x, y).
struct Monomial {
    double coef = 0.0;
    int pt = 0;
    int px = 0;
    int py = 0;
};

class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Monomial> terms) : terms_(std::move(terms)) {}

    /// Parses a monomial such as "1", "t", "x^2", "t*x*y^3" with coefficient.
    /// Throws std::invalid_argument with a description on malformed input.
    static Monomial parse_monomial(const std::string& text, double coef);

    double value(const Point3& p) const;
    double d_t(const Point3& p) const;
    double d_x(const Point3& p) const;
    double d_y(const Point3& p) const;
    /// d_w = (d_x - i d_y) / 2.
    cplx d_w(const Point3& p) const { return 0.5 * cplx(d_x(p), -d_y(p)); }

    const std::vector<Monomial>& terms() const { return terms_; }
    bool is_zero() const;
    /// d_t^2 f + d_x^2 f + d_y^2 f vanishes identically.
    bool is_harmonic() const;
    std::string str() const;

  private:
    double eval(const Point3& p, int dt, int dx, int dy) const;
    std::vector<Monomial> terms_;
};

/// Diagonal gauge factor w^p exp(a t + b w + c wbar).
struct DiagonalFactor {
    int w_power = 0;
    double t_rate = 0.0;
    cplx w_rate{0.0, 0.0};
    cplx wbar_rate{0.0, 0.0};
};

/// Frame change g(t, w) = C diag(d_1, ..., d_r); new frame = old frame * g.
struct GaugeGenerator {
    Mat constant;                        // empty means identity
    std::vector<DiagonalFactor> diagonal;  // empty means identity

    struct Value {
        Mat g;
        Mat d_t;
        Mat d_w;
        Mat d_wbar;
    };
    Value evaluate(const Point3& p, int rank) const;
    /// Closed-form check that no factor depends on t or wbar.
    bool analytically_mini_holomorphic() const;
    std::string str() const;
};

ModelPtr dirac_model(int m);
ModelPtr counterexample_model();
ModelPtr direct_sum(const std::vector<ModelPtr>& models);
ModelPtr dual(const ModelPtr& model);
/// With `mini_holomorphic` set, the generator is verified numerically at sample
/// points to satisfy d_t g = 0 and d_wbar g = 0.
ModelPtr gauge(const ModelPtr& model, const GaugeGenerator& g, bool mini_holomorphic);
ModelPtr metric_twist(const ModelPtr& model, const Polynomial& f);
/// Single-chart model on U* from an arbitrary metric function. Derivatives are
/// finite-differenced.
ModelPtr metric_function_model(int rank, MetricFunction H, std::string label);

/// Configuration tree over the constructions above.
struct ModelSpec {
    enum class Kind { DiracSum, Counterexample, DirectSum, Dual, Gauge, MetricTwist };

    Kind kind = Kind::DiracSum;
    std::vector<int> charges;          // DiracSum
    std::vector<ModelSpec> children;   // DirectSum: all; Dual/Gauge/MetricTwist: one
    GaugeGenerator generator;          // Gauge
    bool mini_holomorphic = false;     // Gauge
    Polynomial twist;                  // MetricTwist

    int depth() const;
    std::string label() const;
    /// False when the tree contains a metric twist by a non-harmonic
    /// polynomial, i.e. the model is not a monopole by construction.
    bool monopole_by_construction() const;
};

inline constexpr int kMaxSpecDepth = 16;

ModelPtr build_model(const ModelSpec& spec);

}  // namespace monolab
