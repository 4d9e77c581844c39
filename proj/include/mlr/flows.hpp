#ifndef MLR_FLOWS_HPP
#define MLR_FLOWS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "mlr/polytope.hpp"
#include "mlr/vector_field.hpp"
#include "mlr/words.hpp"

namespace mlr {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct FlowConfig {
    int steps_per_unit = 64;  // >= 8
    double max_time = 4.0;
    std::uint64_t seed = 0;
    double divergence_bound = 1e6;
    int threads = 0;  // 0: MLRADON_THREADS env, else hardware concurrency

    void validate() const;
    int effective_threads() const;
};

// Deterministic counter-based RNG: every sample index gets its own stream,
// so results are independent of the worker count.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
    double uniform();                // [0,1)
    int uniform_int(int n);          // {0,..,n-1}
    double uniform_signed();         // [-1,1)
};
Rng stream_rng(std::uint64_t seed, std::uint64_t stream);

// Polynomial field flattened for fast double evaluation in the integrators.
class CompiledField {
  public:
    explicit CompiledField(const PolyVectorField& f);
    int dim() const { return n_; }
    void eval(const double* x, double* out) const;
    Vec operator()(const Vec& x) const;

  private:
    struct Term {
        double coef;
        std::vector<std::pair<int, unsigned>> powers;  // (variable, exponent)
    };
    int n_;
    std::vector<std::vector<Term>> comps_;
};

// Classical fixed-step RK4 for xdot = X(x), time t (either sign).
// Step count is ceil(steps_per_unit * |t|), at least 1.
Vec flow(const CompiledField& X, const Vec& x, double t, const FlowConfig& cfg);
Vec flow(const PolyVectorField& X, const Vec& x, double t, const FlowConfig& cfg);

struct BallSpec {
    Vec base;                  // x0
    std::vector<double> delta; // k positive radii
    int segments = -1;         // < 0 -> 3n; 0 is the degenerate one-point ball
    int samples = 200000;
    double grid_h = 0.0;       // 0 -> min(delta)/32

    void validate() const;
    int effective_segments(int n) const;
    double effective_h() const;
    // largest eps with delta_i <= delta_j^eps for all i,j (the nondegeneracy
    // exponent of (13)); nullopt when some delta_j >= 1.
    std::optional<double> nondegeneracy_eps() const;
};

struct PointCloud {
    int dim = 0;
    Mat points;  // one row per sample
    std::string provenance;
};

// Sampled Carnot-Caratheodory ball B(x0; delta): random flow compositions
// e^{t_N delta_{j_N} X_{j_N}} ... e^{t_1 delta_{j_1} X_{j_1}}(x0) with field
// indices uniform, the |t|-budget split by a flat simplex draw and signs
// uniform.  Reproducible; worker-count independent.
PointCloud sample_ball(const std::vector<PolyVectorField>& fields, const BallSpec& spec,
                       const FlowConfig& cfg);

// Axis-aligned occupancy grid; cells are anchored at the origin.  Measure is
// (occupied cells) * prod(cell sizes).
class OccupancyGrid {
  public:
    OccupancyGrid(int dim, std::vector<double> cell_sizes);
    OccupancyGrid(int dim, double h);

    void insert(const double* p);
    void insert_cloud(const PointCloud& cloud);
    bool occupied_at(const double* p) const;
    std::size_t occupied() const { return cells_.size(); }
    double measure() const;
    int dim() const { return dim_; }
    const std::vector<double>& cell_sizes() const { return h_; }
    // centers of occupied cells, sorted (deterministic order)
    std::vector<Vec> cell_centers() const;

  private:
    struct KeyHash {
        std::size_t operator()(const std::vector<std::int64_t>& v) const;
    };
    int dim_;
    std::vector<double> h_;
    std::unordered_set<std::vector<std::int64_t>, KeyHash> cells_;
};

// Occupancy measure of the cloud on an isotropic grid of cell size h.
double ball_volume(const PointCloud& cloud, double h);

// Occupancy measure on a grid matched to the cloud extent: cells_per_dim
// cells across each dimension.  Scale-covariant, so log-log volume slopes
// across a dyadic delta family are unbiased even for very anisotropic balls.
double extent_volume(const PointCloud& cloud, int cells_per_dim = 32);

// B_j(x0; delta): image of a random sample of the t-box [-1,1]^n under the
// n-fold flow composition prescribed by the index sequence j.
PointCloud sample_box_ball(const std::vector<PolyVectorField>& fields, const Vec& x0,
                           const std::vector<double>& delta, const std::vector<int>& jseq,
                           int samples, const FlowConfig& cfg);

// Measure of pi(occupied cell centers) on an (n-1)-dimensional grid of cell
// size hprime.
double project_measure(const OccupancyGrid& grid, const PolyMap& pi, double hprime);

// A measurable set Omega with its projections and the alpha_j = |Omega| /
// |pi_j(Omega)| statistics of (5).
struct SetSample {
    OccupancyGrid omega;
    std::vector<PolyMap> maps;
    double omega_measure = 0.0;
    std::vector<double> projection_measures;
    std::vector<double> alpha;
};

SetSample make_set_sample(const PointCloud& cloud, const std::vector<PolyMap>& maps, double h);

// alpha^b / |Omega| = prod alpha_j^{b_j} / |Omega|; the restricted weak-type
// functional of (6).
double weak_type_ratio(const SetSample& s, const std::vector<double>& b);

// |B(x0; 2 delta)| / |B(x0; delta)| on grids of matched resolution.
double doubling_ratio(const std::vector<PolyVectorField>& fields, const BallSpec& spec,
                      const FlowConfig& cfg);

// The chart Phi(t) = exp(sum_j K^{-1} (K delta)^{deg w_j} t_j X_{w_j})(x0)
// with numerical DPhi and the pullback fields Y_w of (20), sampled over a
// ball |t| <= domain_radius.
struct ChartSamplePoint {
    Vec t;
    Vec phi;
    Mat dphi;
    Mat y;  // column i is Y_{w_i}(t)
};

struct ChartData {
    Vec base;
    std::vector<double> delta;
    double K = 1.0;
    std::vector<Word> words;  // the n words of I_{x0}
    double domain_radius = 0.5;
    std::vector<ChartSamplePoint> samples;  // samples[0] is t = 0
};

ChartData phi_chart(const Catalog& c, const Vec& x0, const std::vector<double>& delta, double K,
                    const std::vector<Word>& words, const FlowConfig& cfg,
                    double domain_radius = 0.5, int sample_count = 200);

// Empirical checks of Lemmas 6.1, 6.2 and 6.5 on a chart.
struct ChartReport {
    double y0_deviation = 0.0;        // max_i |Y_{w_i}(0) - e_i|
    double max_y_deviation = 0.0;     // max over samples and i of |Y_{w_i}(t) - e_i|
    double y_deviation_per_t = 0.0;   // max over t != 0 of |Y - e| * K / |t|
    double det_min = 0.0, det_max = 0.0;
    double lambda_ratio_min = 0.0, lambda_ratio_max = 0.0;
    double phi_measure_ratio_min = 0.0, phi_measure_ratio_max = 0.0;
    bool y0_ok = false, det_ok = false, lambda_ok = false, measure_ok = false;
};

struct ChartTolerances {
    double y0_tol = 1e-5;
    double det_lo = 0.5, det_hi = 2.0;
    double lambda_lo = 0.125, lambda_hi = 8.0;
    double measure_lo = 0.125, measure_hi = 8.0;
};

ChartReport verify_chart_lemmas(const ChartData& chart, const Catalog& c,
                                const std::vector<WordTuple>& tuples, const FlowConfig& cfg,
                                const ChartTolerances& tol = {}, int box_samples = 20000);

// Volume-vs-Lambda comparison across a delta list (K = 1).
struct VolumeRow {
    std::vector<double> delta;
    double ball_volume = 0.0;
    double lambda_norm = 0.0;
    double ratio = 0.0;
};

std::vector<VolumeRow> volume_vs_lambda(const std::vector<PolyVectorField>& fields,
                                        const std::vector<WordTuple>& tuples, const Vec& x0,
                                        const std::vector<std::vector<double>>& delta_list,
                                        int samples, const FlowConfig& cfg);

// Least-squares slope of log(volume) against log(scale).
double fit_loglog_slope(const std::vector<double>& scales, const std::vector<double>& volumes);

// One row of the necessity-witness table: Omega = B(0; delta0^a).
struct WitnessRow {
    double delta0 = 0.0;
    std::vector<double> delta;
    double omega_measure = 0.0;
    std::vector<double> alpha;
    double ratio = 0.0;  // alpha^b / |Omega|
};

// Ratio table for a given direction a and exponent tuple b; the blow-up
// engine behind necessity_witness and its bounded control experiment.
std::vector<WitnessRow> witness_table(const std::vector<PolyVectorField>& fields,
                                      const std::vector<PolyMap>& maps,
                                      const std::vector<double>& a, const std::vector<double>& b,
                                      const std::vector<double>& delta0_list, int samples,
                                      const FlowConfig& cfg);

struct WitnessResult {
    SeparatingFunctional functional;
    std::vector<WitnessRow> rows;
};

// The blow-up demonstration: requires b outside P, separates with
// a = separating_functional(P, b), then tabulates alpha^b / |Omega| for
// Omega = B(0; delta0^a) over the dyadic list.  The ratio column grows as
// delta0 shrinks, contradicting restricted weak-type.
WitnessResult necessity_witness(const std::vector<PolyVectorField>& fields,
                                const std::vector<PolyMap>& maps, const NewtonPolytope& P,
                                const std::vector<Rational>& b,
                                const std::vector<double>& delta0_list, int samples,
                                const FlowConfig& cfg);

}  // namespace mlr

#endif
