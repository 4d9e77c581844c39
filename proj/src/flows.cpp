#include "mlr/flows.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "mlr/errors.hpp"

namespace mlr {

void FlowConfig::validate() const {
    if (steps_per_unit < 8) throw PreconditionError("steps_per_unit must be >= 8");
    if (max_time <= 0) throw PreconditionError("max_time must be positive");
    if (divergence_bound <= 0) throw PreconditionError("divergence_bound must be positive");
}

int FlowConfig::effective_threads() const {
    if (threads > 0) return threads;
    if (const char* env = std::getenv("MLRADON_THREADS")) {
        int t = std::atoi(env);
        if (t > 0) return std::min(t, 64);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return std::max(1, std::min<int>(static_cast<int>(hw), 16));
}

std::uint64_t Rng::next() {
    // splitmix64
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

int Rng::uniform_int(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

double Rng::uniform_signed() { return 2.0 * uniform() - 1.0; }

Rng stream_rng(std::uint64_t seed, std::uint64_t stream) {
    Rng r(seed ^ (0x6a09e667f3bcc909ULL + stream * 0xd1b54a32d192ed03ULL));
    r.next();  // decorrelate nearby streams
    return r;
}

CompiledField::CompiledField(const PolyVectorField& f) : n_(f.nvars()) {
    comps_.resize(n_);
    for (int j = 0; j < n_; ++j) {
        for (const auto& [e, c] : f.components[j].terms()) {
            Term t;
            t.coef = to_double(c);
            for (int i = 0; i < n_; ++i)
                if (e[i] > 0) t.powers.emplace_back(i, e[i]);
            comps_[j].push_back(std::move(t));
        }
    }
}

void CompiledField::eval(const double* x, double* out) const {
    for (int j = 0; j < n_; ++j) {
        double sum = 0;
        for (const auto& t : comps_[j]) {
            double v = t.coef;
            for (const auto& [i, p] : t.powers)
                for (unsigned q = 0; q < p; ++q) v *= x[i];
            sum += v;
        }
        out[j] = sum;
    }
}

Vec CompiledField::operator()(const Vec& x) const {
    Vec out(n_);
    eval(x.data(), out.data());
    return out;
}

namespace {

void rk4_step(const CompiledField& X, double* x, double h, int n, double* k1, double* k2,
              double* k3, double* k4, double* tmp) {
    X.eval(x, k1);
    for (int i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    X.eval(tmp, k2);
    for (int i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    X.eval(tmp, k3);
    for (int i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
    X.eval(tmp, k4);
    for (int i = 0; i < n; ++i) x[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
}

struct FlowScratch {
    std::vector<double> k1, k2, k3, k4, tmp;
    explicit FlowScratch(int n) : k1(n), k2(n), k3(n), k4(n), tmp(n) {}
};

void flow_inplace(const CompiledField& X, double* x, double t, const FlowConfig& cfg,
                  FlowScratch& s) {
    if (t == 0.0) return;
    double at = std::abs(t);
    if (at > cfg.max_time) throw PreconditionError("flow: |t| exceeds max_time");
    int n = X.dim();
    int steps = std::max(1, static_cast<int>(std::ceil(cfg.steps_per_unit * at)));
    double h = t / steps;
    for (int s_i = 0; s_i < steps; ++s_i) {
        rk4_step(X, x, h, n, s.k1.data(), s.k2.data(), s.k3.data(), s.k4.data(), s.tmp.data());
        for (int i = 0; i < n; ++i)
            if (!(std::abs(x[i]) <= cfg.divergence_bound))
                throw NumericalError("flow diverged near time " +
                                     std::to_string(h * (s_i + 1)));
    }
}

}  // namespace

Vec flow(const CompiledField& X, const Vec& x, double t, const FlowConfig& cfg) {
    cfg.validate();
    Vec out = x;
    FlowScratch s(X.dim());
    flow_inplace(X, out.data(), t, cfg, s);
    return out;
}

Vec flow(const PolyVectorField& X, const Vec& x, double t, const FlowConfig& cfg) {
    return flow(CompiledField(X), x, t, cfg);
}

void BallSpec::validate() const {
    for (double d : delta)
        if (!(d > 0)) throw PreconditionError("ball radii must be positive");
    if (delta.empty()) throw PreconditionError("ball needs at least one radius");
    if (samples < 1) throw PreconditionError("ball needs at least one sample");
}

int BallSpec::effective_segments(int n) const { return segments >= 0 ? segments : 3 * n; }

double BallSpec::effective_h() const {
    if (grid_h > 0) return grid_h;
    double m = delta[0];
    for (double d : delta) m = std::min(m, d);
    return m / 32.0;
}

std::optional<double> BallSpec::nondegeneracy_eps() const {
    double eps = 1.0;
    for (double di : delta) {
        if (di >= 1.0) return std::nullopt;
        for (double dj : delta) eps = std::min(eps, std::log(di) / std::log(dj));
    }
    return eps;
}

namespace {

// One CC-ball sample: a random composition of scaled flows with the time
// budget split uniformly over the simplex.
void ball_sample(const std::vector<CompiledField>& fields, const std::vector<double>& delta,
                 const Vec& base, int segments, Rng& rng, const FlowConfig& cfg, FlowScratch& s,
                 double* out) {
    int n = static_cast<int>(base.size());
    int k = static_cast<int>(fields.size());
    for (int i = 0; i < n; ++i) out[i] = base[i];
    if (segments == 0) return;
    // flat simplex split of the unit |t| budget via sorted uniforms
    std::vector<double> cuts(segments - 1);
    for (auto& c : cuts) c = rng.uniform();
    std::sort(cuts.begin(), cuts.end());
    double prev = 0.0;
    for (int seg = 0; seg < segments; ++seg) {
        double next = seg + 1 < segments ? cuts[seg] : 1.0;
        double len = next - prev;
        prev = next;
        int j = rng.uniform_int(k);
        double sign = rng.next() & 1 ? 1.0 : -1.0;
        flow_inplace(fields[j], out, sign * len * delta[j], cfg, s);
    }
}

void parallel_for_samples(int total, int threads, const std::function<void(int, int)>& run_range) {
    if (threads <= 1 || total < 2 * threads) {
        run_range(0, total);
        return;
    }
    std::vector<std::thread> pool;
    int chunk = (total + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        int lo = t * chunk, hi = std::min(total, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(run_range, lo, hi);
    }
    for (auto& th : pool) th.join();
}

}  // namespace

PointCloud sample_ball(const std::vector<PolyVectorField>& fields, const BallSpec& spec,
                       const FlowConfig& cfg) {
    cfg.validate();
    spec.validate();
    if (fields.empty()) throw PreconditionError("sample_ball: no fields");
    if (fields.size() != spec.delta.size())
        throw PreconditionError("sample_ball: radii count must match field count");
    int n = fields[0].nvars();
    if (spec.base.size() != n) throw PreconditionError("sample_ball: base dimension mismatch");
    std::vector<CompiledField> compiled(fields.begin(), fields.end());
    int segments = spec.effective_segments(n);

    PointCloud cloud;
    cloud.dim = n;
    cloud.points.resize(spec.samples, n);
    cloud.provenance = "ball";

    std::exception_ptr error;
    std::mutex error_mu;
    auto run_range = [&](int lo, int hi) {
        FlowScratch scratch(n);
        std::vector<double> row(n);
        try {
            for (int i = lo; i < hi; ++i) {
                Rng rng = stream_rng(cfg.seed, static_cast<std::uint64_t>(i));
                ball_sample(compiled, spec.delta, spec.base, segments, rng, cfg, scratch,
                            row.data());
                for (int d = 0; d < n; ++d) cloud.points(i, d) = row[d];
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mu);
            if (!error) error = std::current_exception();
        }
    };
    parallel_for_samples(spec.samples, cfg.effective_threads(), run_range);
    if (error) std::rethrow_exception(error);
    return cloud;
}

OccupancyGrid::OccupancyGrid(int dim, std::vector<double> cell_sizes)
    : dim_(dim), h_(std::move(cell_sizes)) {
    if (static_cast<int>(h_.size()) != dim_) throw PreconditionError("grid cell size dimension mismatch");
    for (double h : h_)
        if (!(h > 0)) throw PreconditionError("grid cell sizes must be positive");
}

OccupancyGrid::OccupancyGrid(int dim, double h) : OccupancyGrid(dim, std::vector<double>(dim, h)) {}

std::size_t OccupancyGrid::KeyHash::operator()(const std::vector<std::int64_t>& v) const {
    std::size_t h = 1469598103934665603ULL;
    for (std::int64_t x : v) {
        h ^= static_cast<std::size_t>(x);
        h *= 1099511628211ULL;
    }
    return h;
}

void OccupancyGrid::insert(const double* p) {
    std::vector<std::int64_t> key(dim_);
    for (int i = 0; i < dim_; ++i)
        key[i] = static_cast<std::int64_t>(std::floor(p[i] / h_[i]));
    cells_.insert(std::move(key));
}

void OccupancyGrid::insert_cloud(const PointCloud& cloud) {
    if (cloud.dim != dim_) throw PreconditionError("grid/cloud dimension mismatch");
    std::vector<double> row(dim_);
    for (Eigen::Index i = 0; i < cloud.points.rows(); ++i) {
        for (int d = 0; d < dim_; ++d) row[d] = cloud.points(i, d);
        insert(row.data());
    }
}

bool OccupancyGrid::occupied_at(const double* p) const {
    std::vector<std::int64_t> key(dim_);
    for (int i = 0; i < dim_; ++i)
        key[i] = static_cast<std::int64_t>(std::floor(p[i] / h_[i]));
    return cells_.count(key) > 0;
}

double OccupancyGrid::measure() const {
    double cell = 1.0;
    for (double h : h_) cell *= h;
    return static_cast<double>(cells_.size()) * cell;
}

std::vector<Vec> OccupancyGrid::cell_centers() const {
    std::vector<std::vector<std::int64_t>> keys(cells_.begin(), cells_.end());
    std::sort(keys.begin(), keys.end());
    std::vector<Vec> centers;
    centers.reserve(keys.size());
    for (const auto& key : keys) {
        Vec c(dim_);
        for (int i = 0; i < dim_; ++i) c[i] = (static_cast<double>(key[i]) + 0.5) * h_[i];
        centers.push_back(std::move(c));
    }
    return centers;
}

double ball_volume(const PointCloud& cloud, double h) {
    if (!(h > 0)) throw PreconditionError("ball_volume: h must be positive");
    if (cloud.points.rows() == 0) throw PreconditionError("ball_volume: empty cloud");
    OccupancyGrid grid(cloud.dim, h);
    grid.insert_cloud(cloud);
    return grid.measure();
}

double extent_volume(const PointCloud& cloud, int cells_per_dim) {
    if (cloud.points.rows() == 0) throw PreconditionError("extent_volume: empty cloud");
    int n = cloud.dim;
    std::vector<double> h(n);
    for (int d = 0; d < n; ++d) {
        double lo = cloud.points.col(d).minCoeff();
        double hi = cloud.points.col(d).maxCoeff();
        double ext = hi - lo;
        if (!(ext > 0)) return 0.0;  // flat in some direction: measure zero
        h[d] = ext / cells_per_dim * (1 + 1e-12);
    }
    OccupancyGrid grid(n, h);
    grid.insert_cloud(cloud);
    return grid.measure();
}

PointCloud sample_box_ball(const std::vector<PolyVectorField>& fields, const Vec& x0,
                           const std::vector<double>& delta, const std::vector<int>& jseq,
                           int samples, const FlowConfig& cfg) {
    cfg.validate();
    if (fields.empty()) throw PreconditionError("sample_box_ball: no fields");
    int n = fields[0].nvars();
    int k = static_cast<int>(fields.size());
    if (static_cast<int>(jseq.size()) != n)
        throw PreconditionError("sample_box_ball: index sequence must have length n");
    for (int j : jseq)
        if (j < 1 || j > k) throw PreconditionError("sample_box_ball: index out of range");
    std::vector<CompiledField> compiled(fields.begin(), fields.end());

    PointCloud cloud;
    cloud.dim = n;
    cloud.points.resize(samples, n);
    cloud.provenance = "box-ball";

    std::exception_ptr error;
    std::mutex error_mu;
    auto run_range = [&](int lo, int hi) {
        FlowScratch scratch(n);
        std::vector<double> row(n);
        try {
            for (int i = lo; i < hi; ++i) {
                Rng rng = stream_rng(cfg.seed ^ 0x426f78ULL, static_cast<std::uint64_t>(i));
                for (int d = 0; d < n; ++d) row[d] = x0[d];
                for (int s = 0; s < n; ++s) {
                    double t = rng.uniform_signed();
                    flow_inplace(compiled[jseq[s] - 1], row.data(), t * delta[jseq[s] - 1], cfg,
                                 scratch);
                }
                for (int d = 0; d < n; ++d) cloud.points(i, d) = row[d];
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mu);
            if (!error) error = std::current_exception();
        }
    };
    parallel_for_samples(samples, cfg.effective_threads(), run_range);
    if (error) std::rethrow_exception(error);
    return cloud;
}

double project_measure(const OccupancyGrid& grid, const PolyMap& pi, double hprime) {
    if (!(hprime > 0)) throw PreconditionError("project_measure: h' must be positive");
    int m = pi.nvars - 1;
    OccupancyGrid proj(m, hprime);
    std::vector<double> x(pi.nvars), y(m);
    for (const auto& center : grid.cell_centers()) {
        for (int i = 0; i < pi.nvars; ++i) x[i] = center[i];
        auto img = pi.evaluate(x);
        for (int i = 0; i < m; ++i) y[i] = img[i];
        proj.insert(y.data());
    }
    return proj.measure();
}

SetSample make_set_sample(const PointCloud& cloud, const std::vector<PolyMap>& maps, double h) {
    OccupancyGrid grid(cloud.dim, h);
    grid.insert_cloud(cloud);
    SetSample s{std::move(grid), maps, 0.0, {}, {}};
    s.omega_measure = s.omega.measure();
    for (const auto& pi : maps) {
        double pm = project_measure(s.omega, pi, h);
        s.projection_measures.push_back(pm);
        if (pm <= 0) throw NumericalError("projection measure vanished");
        s.alpha.push_back(s.omega_measure / pm);
    }
    return s;
}

double weak_type_ratio(const SetSample& s, const std::vector<double>& b) {
    if (b.size() != s.alpha.size()) throw PreconditionError("weak_type_ratio: arity mismatch");
    if (s.omega_measure <= 0) throw PreconditionError("weak_type_ratio: empty Omega");
    double prod = 1.0;
    for (std::size_t j = 0; j < b.size(); ++j) prod *= std::pow(s.alpha[j], b[j]);
    return prod / s.omega_measure;
}

double doubling_ratio(const std::vector<PolyVectorField>& fields, const BallSpec& spec,
                      const FlowConfig& cfg) {
    BallSpec doubled = spec;
    for (auto& d : doubled.delta) d *= 2;
    double h = spec.effective_h();
    PointCloud small = sample_ball(fields, spec, cfg);
    PointCloud big = sample_ball(fields, doubled, cfg);
    double vs = ball_volume(small, h);
    double vb = ball_volume(big, h);
    if (vs <= 0) throw NumericalError("doubling_ratio: empty small ball");
    return vb / vs;
}

// Evaluates Phi and DPhi for a fixed chart.
class ChartEvaluator {
  public:
    ChartEvaluator(const Catalog& c, const Vec& x0, const std::vector<double>& delta, double K,
                   const std::vector<Word>& words, const FlowConfig& cfg)
        : x0_(x0), cfg_(cfg), n_(c.nvars()) {
        for (const auto& w : words) {
            fields_.emplace_back(c.word_field(w));
            coeff_.push_back(scale_power(delta, K, word_degree(w, c.k())) / K);
        }
    }

    // time-1 RK4 flow of the fixed field sum_j t_j coeff_j X_{w_j}
    Vec phi(const Vec& t) const {
        Vec x = x0_;
        int steps = cfg_.steps_per_unit;
        double h = 1.0 / steps;
        Vec k1(n_), k2(n_), k3(n_), k4(n_), tmp(n_);
        for (int s = 0; s < steps; ++s) {
            field(t, x, k1);
            tmp = x + 0.5 * h * k1;
            field(t, tmp, k2);
            tmp = x + 0.5 * h * k2;
            field(t, tmp, k3);
            tmp = x + h * k3;
            field(t, tmp, k4);
            x += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
            if (!(x.cwiseAbs().maxCoeff() <= cfg_.divergence_bound))
                throw NumericalError("chart flow diverged");
        }
        return x;
    }

    // five-point central differences (one Richardson level), step 1e-4
    Mat dphi(const Vec& t) const {
        Mat J(n_, n_);
        double h = 1e-4;
        for (int j = 0; j < n_; ++j) {
            Vec tp = t, tm = t, tp2 = t, tm2 = t;
            tp[j] += h;
            tm[j] -= h;
            tp2[j] += 2 * h;
            tm2[j] -= 2 * h;
            J.col(j) = (8.0 * (phi(tp) - phi(tm)) - (phi(tp2) - phi(tm2))) / (12.0 * h);
        }
        return J;
    }

    Vec scaled_word_value(int i, const Vec& x) const {
        Vec v(n_);
        fields_[i].eval(x.data(), v.data());
        return coeff_[i] * v;
    }

    int dim() const { return n_; }

  private:
    void field(const Vec& t, const Vec& x, Vec& out) const {
        out.setZero();
        Vec val(n_);
        for (std::size_t j = 0; j < fields_.size(); ++j) {
            fields_[j].eval(x.data(), val.data());
            out += t[j] * coeff_[j] * val;
        }
    }

    Vec x0_;
    FlowConfig cfg_;
    int n_;
    std::vector<CompiledField> fields_;
    std::vector<double> coeff_;
};

ChartData phi_chart(const Catalog& c, const Vec& x0, const std::vector<double>& delta, double K,
                    const std::vector<Word>& words, const FlowConfig& cfg, double domain_radius,
                    int sample_count) {
    cfg.validate();
    int n = c.nvars();
    if (static_cast<int>(words.size()) != n)
        throw PreconditionError("phi_chart: need exactly n words");
    if (K < 1) throw PreconditionError("phi_chart: K must be >= 1");
    ChartEvaluator ev(c, x0, delta, K, words, cfg);

    ChartData chart;
    chart.base = x0;
    chart.delta = delta;
    chart.K = K;
    chart.words = words;
    chart.domain_radius = domain_radius;

    Rng rng = stream_rng(cfg.seed, 0x434841525453ULL);
    std::vector<Vec> ts;
    ts.push_back(Vec::Zero(n));
    while (static_cast<int>(ts.size()) < sample_count + 1) {
        Vec t(n);
        for (int i = 0; i < n; ++i) t[i] = domain_radius * rng.uniform_signed();
        if (t.norm() <= domain_radius) ts.push_back(t);
    }

    for (const auto& t : ts) {
        ChartSamplePoint sp;
        sp.t = t;
        sp.phi = ev.phi(t);
        sp.dphi = ev.dphi(t);
        Eigen::JacobiSVD<Mat> svd(sp.dphi, Eigen::ComputeFullU | Eigen::ComputeFullV);
        double smin = svd.singularValues()(n - 1);
        double smax = svd.singularValues()(0);
        if (!(smin > 0) || smax / smin > 1e12) {
            std::ostringstream os;
            os << "phi_chart: DPhi singular at t = (";
            for (int i = 0; i < n; ++i) os << (i ? "," : "") << t[i];
            os << ")";
            throw NumericalError(os.str());
        }
        Eigen::PartialPivLU<Mat> lu(sp.dphi);
        sp.y.resize(n, n);
        for (int i = 0; i < n; ++i) sp.y.col(i) = lu.solve(ev.scaled_word_value(i, sp.phi));
        chart.samples.push_back(std::move(sp));
    }
    return chart;
}

ChartReport verify_chart_lemmas(const ChartData& chart, const Catalog& c,
                                const std::vector<WordTuple>& tuples, const FlowConfig& cfg,
                                const ChartTolerances& tol, int box_samples) {
    if (chart.samples.empty()) throw PreconditionError("verify_chart_lemmas: chart has no samples");
    int n = chart.base.size();
    ChartReport rep;
    rep.det_min = rep.lambda_ratio_min = rep.phi_measure_ratio_min =
        std::numeric_limits<double>::infinity();

    // the chart's own tuple index inside the catalog enumeration
    Degree chart_deg(c.k(), 0);
    for (const auto& w : chart.words) chart_deg = degree_sum(chart_deg, word_degree(w, c.k()));

    for (const auto& sp : chart.samples) {
        double dev = 0;
        for (int i = 0; i < n; ++i) {
            Vec e = Vec::Zero(n);
            e[i] = 1.0;
            dev = std::max(dev, (sp.y.col(i) - e).norm());
        }
        if (sp.t.norm() == 0)
            rep.y0_deviation = dev;
        else
            rep.y_deviation_per_t = std::max(rep.y_deviation_per_t, dev * chart.K / sp.t.norm());
        rep.max_y_deviation = std::max(rep.max_y_deviation, dev);

        double det = std::abs(sp.y.determinant());
        rep.det_min = std::min(rep.det_min, det);
        rep.det_max = std::max(rep.det_max, det);

        // |Lambda(Phi(t))| vs (K delta)^{deg I} |lambda_I(Phi(t))|
        std::vector<double> x(sp.phi.data(), sp.phi.data() + n);
        double lam_norm = 0;
        for (const auto& tup : tuples) {
            double v = scale_power(chart.delta, chart.K, tup.degree) *
                       std::abs(tup.lambda.evaluate(x));
            lam_norm = std::max(lam_norm, v);
        }
        double chart_val = 0;
        for (const auto& tup : tuples) {
            if (tup.degree == chart_deg) {
                // any tuple with the chart's words (sorted) works; match exactly
                std::vector<Word> sorted_words = chart.words;
                std::sort(sorted_words.begin(), sorted_words.end());
                if (tup.words == sorted_words) {
                    chart_val = scale_power(chart.delta, chart.K, tup.degree) *
                                std::abs(tup.lambda.evaluate(x));
                    break;
                }
            }
        }
        if (chart_val > 0) {
            double ratio = lam_norm / chart_val;
            rep.lambda_ratio_min = std::min(rep.lambda_ratio_min, ratio);
            rep.lambda_ratio_max = std::max(rep.lambda_ratio_max, ratio);
        }
    }

    // Lemma 6.5: |Phi(E)| ~ K^{-n} |Lambda(x0)| |E| on sampled boxes
    LambdaVector lv = lambda_vector(tuples, chart.delta, chart.K);
    double expected_density = std::pow(chart.K, -n) * lv.norm;
    Rng rng = stream_rng(cfg.seed, 0x424f584553ULL);
    ChartEvaluator ev(c, chart.base, chart.delta, chart.K, chart.words, cfg);
    for (int box = 0; box < 3; ++box) {
        double r = chart.domain_radius;
        Vec lo(n), hi(n);
        for (int i = 0; i < n; ++i) {
            double a = r * rng.uniform_signed() * 0.5, b = r * rng.uniform_signed() * 0.5;
            lo[i] = std::min(a, b);
            hi[i] = std::max(a, b) + 0.1 * r;
        }
        double evol = 1.0;
        for (int i = 0; i < n; ++i) evol *= hi[i] - lo[i];
        PointCloud img;
        img.dim = n;
        img.points.resize(box_samples, n);
        for (int s = 0; s < box_samples; ++s) {
            Vec t(n);
            for (int i = 0; i < n; ++i) t[i] = lo[i] + (hi[i] - lo[i]) * rng.uniform();
            Vec ph = ev.phi(t);
            for (int i = 0; i < n; ++i) img.points(s, i) = ph[i];
        }
        double measured = extent_volume(img);
        double ratio = measured / (expected_density * evol);
        rep.phi_measure_ratio_min = std::min(rep.phi_measure_ratio_min, ratio);
        rep.phi_measure_ratio_max = std::max(rep.phi_measure_ratio_max, ratio);
    }

    rep.y0_ok = rep.y0_deviation <= tol.y0_tol;
    rep.det_ok = rep.det_min >= tol.det_lo && rep.det_max <= tol.det_hi;
    rep.lambda_ok = rep.lambda_ratio_min >= tol.lambda_lo && rep.lambda_ratio_max <= tol.lambda_hi;
    rep.measure_ok =
        rep.phi_measure_ratio_min >= tol.measure_lo && rep.phi_measure_ratio_max <= tol.measure_hi;
    return rep;
}

std::vector<VolumeRow> volume_vs_lambda(const std::vector<PolyVectorField>& fields,
                                        const std::vector<WordTuple>& tuples, const Vec& x0,
                                        const std::vector<std::vector<double>>& delta_list,
                                        int samples, const FlowConfig& cfg) {
    std::vector<VolumeRow> rows;
    for (const auto& delta : delta_list) {
        BallSpec spec;
        spec.base = x0;
        spec.delta = delta;
        spec.samples = samples;
        PointCloud cloud = sample_ball(fields, spec, cfg);
        VolumeRow row;
        row.delta = delta;
        row.ball_volume = extent_volume(cloud);
        row.lambda_norm = lambda_vector(tuples, delta, 1.0).norm;
        row.ratio = row.lambda_norm > 0 ? row.ball_volume / row.lambda_norm : 0.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

double fit_loglog_slope(const std::vector<double>& scales, const std::vector<double>& volumes) {
    if (scales.size() != volumes.size() || scales.size() < 2)
        throw PreconditionError("fit_loglog_slope: need matching lists of length >= 2");
    double sx = 0, sy = 0;
    int n = static_cast<int>(scales.size());
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
        if (!(scales[i] > 0) || !(volumes[i] > 0))
            throw NumericalError("fit_loglog_slope: nonpositive entry");
        xs[i] = std::log(scales[i]);
        ys[i] = std::log(volumes[i]);
        sx += xs[i];
        sy += ys[i];
    }
    double mx = sx / n, my = sy / n, num = 0, den = 0;
    for (int i = 0; i < n; ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return num / den;
}

std::vector<WitnessRow> witness_table(const std::vector<PolyVectorField>& fields,
                                      const std::vector<PolyMap>& maps,
                                      const std::vector<double>& a, const std::vector<double>& b,
                                      const std::vector<double>& delta0_list, int samples,
                                      const FlowConfig& cfg) {
    if (maps.size() != fields.size())
        throw PreconditionError("witness_table: need one submersion per field");
    if (a.size() != fields.size() || b.size() != fields.size())
        throw PreconditionError("witness_table: arity mismatch");
    int n = fields[0].nvars();
    std::vector<WitnessRow> rows;
    for (double d0 : delta0_list) {
        if (!(d0 > 0 && d0 < 1))
            throw PreconditionError("witness_table: delta0 must lie in (0,1)");
        WitnessRow row;
        row.delta0 = d0;
        for (double ai : a) row.delta.push_back(std::pow(d0, ai));
        BallSpec spec;
        spec.base = Vec::Zero(n);
        spec.delta = row.delta;
        spec.samples = samples;
        PointCloud cloud = sample_ball(fields, spec, cfg);
        SetSample set = make_set_sample(cloud, maps, spec.effective_h());
        row.omega_measure = set.omega_measure;
        row.alpha = set.alpha;
        row.ratio = weak_type_ratio(set, b);
        rows.push_back(std::move(row));
    }
    return rows;
}

WitnessResult necessity_witness(const std::vector<PolyVectorField>& fields,
                                const std::vector<PolyMap>& maps, const NewtonPolytope& P,
                                const std::vector<Rational>& b,
                                const std::vector<double>& delta0_list, int samples,
                                const FlowConfig& cfg) {
    if (maps.empty()) throw PreconditionError("necessity_witness: submersions pi_j are required");
    if (contains(P, b))
        throw PreconditionError("necessity_witness: b lies in P, nothing to refute");
    WitnessResult out;
    out.functional = separating_functional(P, b);
    std::vector<double> a_d, b_d;
    for (const auto& v : out.functional.a) a_d.push_back(to_double(v));
    for (const auto& v : b) b_d.push_back(to_double(v));
    out.rows = witness_table(fields, maps, a_d, b_d, delta0_list, samples, cfg);
    return out;
}

}  // namespace mlr
