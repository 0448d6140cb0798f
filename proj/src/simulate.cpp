#include "crossmatch/simulate.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <stdexcept>

#include "crossmatch/error.hpp"
#include "crossmatch/estimate.hpp"
#include "crossmatch/parallel.hpp"

namespace crossmatch {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Stream ids under a common seed.
constexpr std::uint64_t kSampleStream = 0;
constexpr std::uint64_t kOracleStream = 1;
constexpr std::uint64_t kTrialStreamBase = 2;

// Engine plus distribution state; one per trial or chunk, never shared.
struct RandomSource {
    explicit RandomSource(std::mt19937_64 e) : engine(std::move(e)) {}

    double normal() { return normal_dist(engine); }
    double uniform() { return uniform_dist(engine); }

    std::mt19937_64 engine;
    std::normal_distribution<double> normal_dist;
    std::uniform_real_distribution<double> uniform_dist;
};

class GaussianModel {
public:
    explicit GaussianModel(const GaussianSpec& spec) : dim_(spec.dim), c0_(spec.c0), c1_(spec.c1) {
        spec.validate();
        const auto d = static_cast<Eigen::Index>(dim_);
        mu0_ = Eigen::Map<const Eigen::VectorXd>(spec.mean0.data(), d);
        mu1_ = Eigen::Map<const Eigen::VectorXd>(spec.mean1.data(), d);
        switch (spec.covariance.kind) {
            case Covariance::Kind::identity:
                factor_ = Eigen::MatrixXd::Identity(d, d);
                break;
            case Covariance::Kind::diagonal:
                factor_ = Eigen::Map<const Eigen::VectorXd>(spec.covariance.values.data(), d).cwiseSqrt().asDiagonal();
                break;
            case Covariance::Kind::full: {
                const Eigen::MatrixXd sigma =
                    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                        spec.covariance.values.data(), d, d);
                Eigen::LLT<Eigen::MatrixXd> llt(sigma);
                if (llt.info() != Eigen::Success) throw NumericError("covariance is not positive definite");
                factor_ = llt.matrixL();
                break;
            }
        }
        // Whitened mean difference L^{-1} (mu0 - mu1).
        shift_ = factor_.triangularView<Eigen::Lower>().solve(mu0_ - mu1_);
    }

    std::size_t dim() const { return dim_; }
    double c0() const { return c0_; }
    double c1() const { return c1_; }

    // x = mu_label + L z with z standard normal.
    void draw(RandomSource& rng, Label label, double* out) const {
        Eigen::VectorXd z(static_cast<Eigen::Index>(dim_));
        for (auto& v : z) v = rng.normal();
        Eigen::Map<Eigen::VectorXd>(out, static_cast<Eigen::Index>(dim_)) =
            (label == 0 ? mu0_ : mu1_) + factor_.triangularView<Eigen::Lower>() * z;
    }

    // Draws from the mixture and returns log(c0 p0(x)) - log(c1 p1(x)).
    double draw_log_ratio(RandomSource& rng, Eigen::VectorXd& z) const {
        const bool from_one = rng.uniform() < c1_;
        for (auto& v : z) v = rng.normal();
        // Whitened residuals: from class 0, w0 = z and w1 = z + shift; from class 1, w1 = z and w0 = z - shift.
        const double q0 = from_one ? (z - shift_).squaredNorm() : z.squaredNorm();
        const double q1 = from_one ? z.squaredNorm() : (z + shift_).squaredNorm();
        return std::log(c0_) - std::log(c1_) - 0.5 * (q0 - q1);
    }

private:
    std::size_t dim_;
    double c0_;
    double c1_;
    Eigen::VectorXd mu0_;
    Eigen::VectorXd mu1_;
    Eigen::MatrixXd factor_;
    Eigen::VectorXd shift_;
};

LabeledDataset draw_sample(const GaussianModel& model, std::size_t m, std::size_t n, RandomSource& rng) {
    const std::size_t d = model.dim();
    std::vector<double> coords((m + n) * d);
    std::vector<Label> labels(m + n, 0);
    for (std::size_t i = 0; i < n + m; ++i) {
        labels[i] = i < n ? 0 : 1;
        model.draw(rng, labels[i], coords.data() + i * d);
    }
    return LabeledDataset(d, std::move(coords), std::move(labels));
}

void check_ascending(const std::vector<std::size_t>& values, const char* what) {
    if (values.empty()) throw std::invalid_argument(std::string(what) + " list is empty");
    if (!std::is_sorted(values.begin(), values.end()) ||
        std::adjacent_find(values.begin(), values.end()) != values.end()) {
        throw std::invalid_argument(std::string(what) + " must be strictly ascending");
    }
}

void check_sizes(const std::vector<std::size_t>& sizes) {
    check_ascending(sizes, "sample size");
    for (std::size_t s : sizes) {
        if (s < 4 || s % 2 != 0) throw std::invalid_argument("sample sizes must be even and at least 4");
    }
}

void check_options(const ExperimentOptions& options) {
    if (options.trials < 1) throw std::invalid_argument("experiments need at least one trial");
}

ExperimentRow summarize(double sweep_value, std::string method, const std::vector<double>& values, double reference,
                        const ExperimentOptions& options) {
    ExperimentRow row;
    row.sweep_value = sweep_value;
    row.method = std::move(method);
    row.trials = values.size();
    row.seed = options.seed;
    row.oracle = reference;
    double sum = 0.0;
    for (double v : values) sum += v;
    row.mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - row.mean) * (v - row.mean);
    row.std = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
    row.max = *std::max_element(values.begin(), values.end());
    if (std::isnan(reference)) {
        row.mse = kNaN;
        row.mae = kNaN;
    } else {
        double se = 0.0;
        double ae = 0.0;
        for (double v : values) {
            se += (v - reference) * (v - reference);
            ae += std::abs(v - reference);
        }
        row.mse = se / static_cast<double>(values.size());
        row.mae = ae / static_cast<double>(values.size());
    }
    return row;
}

ExperimentResult make_result(std::string name, const ExperimentOptions& options) {
    ExperimentResult r;
    r.experiment = std::move(name);
    r.trials = options.trials;
    r.seed = options.seed;
    r.single_trial = options.trials == 1;
    return r;
}

struct EstimateSweep {
    std::vector<std::vector<double>> owm;  // [sweep][trial]
    std::vector<std::vector<double>> fr;
};

// Runs both estimators for every (sweep point, trial) pair.
EstimateSweep run_estimates(const std::vector<GaussianModel>& models, const std::vector<std::size_t>& totals,
                            const ExperimentOptions& options) {
    const std::size_t points = models.size();
    const std::size_t trials = options.trials;
    EstimateSweep out{std::vector<std::vector<double>>(points, std::vector<double>(trials)),
                      std::vector<std::vector<double>>(points, std::vector<double>(trials))};
    parallel_for(points * trials, [&](std::size_t job) {
        const std::size_t p = job / trials;
        const std::size_t t = job % trials;
        RandomSource rng(make_rng(options.seed, kTrialStreamBase + p, t));
        const std::size_t half = totals[p] / 2;
        const auto ds = draw_sample(models[p], half, totals[p] - half, rng);
        const auto both = estimate_both(ds);
        out.owm[p][t] = both.owm.estimate_raw;
        out.fr[p][t] = both.fr.estimate_raw;
    });
    return out;
}

std::string format_number(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return {buf.data(), res.ptr};
}

}  // namespace

GaussianSpec GaussianSpec::isotropic(std::size_t dim, double a, double b, double c0) {
    GaussianSpec s;
    s.dim = dim;
    s.mean0.assign(dim, a);
    s.mean1.assign(dim, b);
    s.c0 = c0;
    s.c1 = 1.0 - c0;
    return s;
}

void GaussianSpec::validate() const {
    if (dim < 1) throw DataError("Gaussian dimension must be at least 1");
    if (mean0.size() != dim || mean1.size() != dim) throw DataError("class means must have length dim");
    for (double x : mean0) {
        if (!std::isfinite(x)) throw DataError("class means must be finite");
    }
    for (double x : mean1) {
        if (!std::isfinite(x)) throw DataError("class means must be finite");
    }
    if (!(c0 > 0.0 && c1 > 0.0) || std::abs(c0 + c1 - 1.0) > 1e-12) {
        throw DataError("Gaussian priors must be positive and sum to 1");
    }
    switch (covariance.kind) {
        case Covariance::Kind::identity:
            break;
        case Covariance::Kind::diagonal:
            if (covariance.values.size() != dim) throw DataError("diagonal covariance needs dim variances");
            for (double v : covariance.values) {
                if (!(v > 0.0) || !std::isfinite(v)) throw NumericError("covariance is not positive definite");
            }
            break;
        case Covariance::Kind::full:
            if (covariance.values.size() != dim * dim) throw DataError("full covariance needs dim*dim entries");
            for (std::size_t i = 0; i < dim; ++i) {
                for (std::size_t j = 0; j < dim; ++j) {
                    if (!std::isfinite(covariance.values[i * dim + j])) throw DataError("covariance must be finite");
                    if (covariance.values[i * dim + j] != covariance.values[j * dim + i]) {
                        throw NumericError("covariance is not symmetric");
                    }
                }
            }
            {
                const auto d = static_cast<Eigen::Index>(dim);
                const Eigen::LLT<Eigen::MatrixXd> llt(
                    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                        covariance.values.data(), d, d));
                if (llt.info() != Eigen::Success) throw NumericError("covariance is not positive definite");
            }
            break;
    }
}

LabeledDataset sample_gaussian(const GaussianSpec& spec, std::size_t m, std::size_t n, std::uint64_t seed) {
    if (m < 1 || n < 1) throw std::invalid_argument("each class needs at least one sample");
    const GaussianModel model(spec);
    RandomSource rng(make_rng(seed, kSampleStream, 0));
    return draw_sample(model, m, n, rng);
}

OracleValue hp_oracle_gaussian(const GaussianSpec& spec, std::size_t samples, std::uint64_t seed) {
    if (samples < 10'000) throw std::invalid_argument("oracle needs at least 10^4 samples");
    const GaussianModel model(spec);
    constexpr std::size_t kChunk = 1 << 16;
    const std::size_t chunks = (samples + kChunk - 1) / kChunk;
    std::vector<double> sum(chunks, 0.0);
    std::vector<double> sum_sq(chunks, 0.0);
    parallel_for(chunks, [&](std::size_t c) {
        RandomSource rng(make_rng(seed, kOracleStream, c));
        Eigen::VectorXd z(static_cast<Eigen::Index>(model.dim()));
        const std::size_t end = std::min(samples, (c + 1) * kChunk);
        double s = 0.0;
        double s2 = 0.0;
        for (std::size_t i = c * kChunk; i < end; ++i) {
            // squared posterior difference ((c0 p0 - c1 p1) / (c0 p0 + c1 p1))^2
            const double t = std::tanh(0.5 * model.draw_log_ratio(rng, z));
            s += t * t;
            s2 += t * t * t * t;
        }
        sum[c] = s;
        sum_sq[c] = s2;
    });
    double s = 0.0;
    double s2 = 0.0;
    for (std::size_t c = 0; c < chunks; ++c) {
        s += sum[c];
        s2 += sum_sq[c];
    }
    const double count = static_cast<double>(samples);
    const double mean = s / count;
    const double var = std::max(0.0, (s2 / count - mean * mean) * count / (count - 1.0));
    const double gap = model.c0() - model.c1();
    const double norm = 4.0 * model.c0() * model.c1();
    return {(mean - gap * gap) / norm, std::sqrt(var / count) / norm};
}

const ExperimentRow& ExperimentResult::row(double sweep_value, const std::string& method) const {
    for (const auto& r : rows) {
        if (r.sweep_value == sweep_value && r.method == method) return r;
    }
    throw std::out_of_range("no experiment row for " + method + " at " + format_number(sweep_value));
}

ExperimentResult experiment_sample_size(const GaussianSpec& spec, const std::vector<std::size_t>& sizes,
                                        const ExperimentOptions& options) {
    check_sizes(sizes);
    check_options(options);
    const GaussianModel model(spec);
    const double oracle = hp_oracle_gaussian(spec, options.oracle_samples, options.seed).value;
    const std::vector<GaussianModel> models(sizes.size(), model);
    const auto sweep = run_estimates(models, sizes, options);

    auto result = make_result("samplesize", options);
    for (std::size_t p = 0; p < sizes.size(); ++p) {
        const auto x = static_cast<double>(sizes[p]);
        result.rows.push_back(summarize(x, "owm", sweep.owm[p], oracle, options));
        result.rows.push_back(summarize(x, "fr", sweep.fr[p], oracle, options));
    }
    return result;
}

ExperimentResult experiment_dimension(const DimensionTemplate& tmpl, const std::vector<std::size_t>& dims,
                                      std::size_t total, const ExperimentOptions& options) {
    check_ascending(dims, "dimension");
    check_options(options);
    if (total < 4 || total % 2 != 0) throw std::invalid_argument("sample size must be even and at least 4");
    if (dims.front() < 1) throw std::invalid_argument("dimensions must be positive");
    std::vector<GaussianModel> models;
    std::vector<double> oracles;
    for (std::size_t d : dims) {
        models.emplace_back(tmpl.at(d));
        oracles.push_back(hp_oracle_gaussian(tmpl.at(d), options.oracle_samples, options.seed).value);
    }
    const auto sweep = run_estimates(models, std::vector<std::size_t>(dims.size(), total), options);

    auto result = make_result("dimension", options);
    for (std::size_t p = 0; p < dims.size(); ++p) {
        const auto x = static_cast<double>(dims[p]);
        result.rows.push_back(summarize(x, "owm", sweep.owm[p], oracles[p], options));
        result.rows.push_back(summarize(x, "fr", sweep.fr[p], oracles[p], options));
    }
    return result;
}

ExperimentResult experiment_assumption1(const GaussianSpec& spec, const std::vector<std::size_t>& sizes,
                                        const ExperimentOptions& options) {
    check_sizes(sizes);
    check_options(options);
    const GaussianModel model(spec);
    const std::size_t trials = options.trials;
    std::vector<std::vector<double>> diffs(sizes.size(), std::vector<double>(trials));
    parallel_for(sizes.size() * trials, [&](std::size_t job) {
        const std::size_t p = job / trials;
        const std::size_t t = job % trials;
        RandomSource rng(make_rng(options.seed, kTrialStreamBase + p, t));
        const std::size_t half = sizes[p] / 2;
        const auto base = draw_sample(model, half, half, rng);

        // Same sample plus one new point from each class.
        const std::size_t d = model.dim();
        std::vector<double> coords(base.coords().begin(), base.coords().end());
        std::vector<Label> labels(base.labels().begin(), base.labels().end());
        for (Label extra : {Label{0}, Label{1}}) {
            coords.resize(coords.size() + d);
            model.draw(rng, extra, coords.data() + coords.size() - d);
            labels.push_back(extra);
        }
        const LabeledDataset grown(d, std::move(coords), std::move(labels));

        const auto before = static_cast<double>(cross_match_count(base));
        const auto after = static_cast<double>(cross_match_count(grown));
        diffs[p][t] = std::abs(after - before);
    });

    auto result = make_result("assumption1", options);
    for (std::size_t p = 0; p < sizes.size(); ++p) {
        result.rows.push_back(summarize(static_cast<double>(sizes[p]), "adiff", diffs[p], kNaN, options));
    }
    return result;
}

void write_results_csv(std::ostream& out, const ExperimentResult& result) {
    out << "sweep_value,method,mean,std,mse,trials,seed\n";
    for (const auto& r : result.rows) {
        out << format_number(r.sweep_value) << ',' << r.method << ',' << format_number(r.mean) << ','
            << format_number(r.std) << ',' << (std::isnan(r.mse) ? std::string() : format_number(r.mse)) << ','
            << r.trials << ',' << r.seed << '\n';
    }
}

void write_results_svg(std::ostream& out, const ExperimentResult& result, const std::string& x_label) {
    constexpr double kWidth = 640.0;
    constexpr double kHeight = 400.0;
    constexpr double kMargin = 60.0;
    if (result.rows.empty()) throw std::invalid_argument("nothing to plot");

    std::map<std::string, std::vector<const ExperimentRow*>> series;
    double x_lo = std::numeric_limits<double>::infinity();
    double x_hi = -x_lo;
    double y_lo = x_lo;
    double y_hi = -x_lo;
    for (const auto& r : result.rows) {
        series[r.method].push_back(&r);
        x_lo = std::min(x_lo, r.sweep_value);
        x_hi = std::max(x_hi, r.sweep_value);
        y_lo = std::min(y_lo, r.mean - r.std);
        y_hi = std::max(y_hi, r.mean + r.std);
    }
    if (x_hi == x_lo) x_hi = x_lo + 1.0;
    if (y_hi == y_lo) y_hi = y_lo + 1.0;
    const auto sx = [&](double x) { return kMargin + (x - x_lo) / (x_hi - x_lo) * (kWidth - 2 * kMargin); };
    const auto sy = [&](double y) { return kHeight - kMargin - (y - y_lo) / (y_hi - y_lo) * (kHeight - 2 * kMargin); };

    const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\"" << kWidth - kMargin << "\" y2=\""
        << kHeight - kMargin << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin << "\" y2=\"" << kHeight - kMargin
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">" << x_label
        << "</text>\n";
    out << "<text x=\"" << kMargin - 5 << "\" y=\"" << kMargin - 10 << "\">" << format_number(y_hi) << "</text>\n";
    out << "<text x=\"" << kMargin - 5 << "\" y=\"" << kHeight - kMargin + 15 << "\">" << format_number(y_lo)
        << "</text>\n";
    std::size_t colour = 0;
    for (const auto& [method, rows] : series) {
        const char* stroke = palette[colour++ % 4];
        out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" points=\"";
        for (const auto* r : rows) out << sx(r->sweep_value) << ',' << sy(r->mean) << ' ';
        out << "\"/>\n";
        for (const auto* r : rows) {
            out << "<line x1=\"" << sx(r->sweep_value) << "\" y1=\"" << sy(r->mean - r->std) << "\" x2=\""
                << sx(r->sweep_value) << "\" y2=\"" << sy(r->mean + r->std) << "\" stroke=\"" << stroke << "\"/>\n";
        }
        out << "<text x=\"" << kWidth - kMargin + 5 << "\" y=\"" << kMargin + 15.0 * static_cast<double>(colour)
            << "\" fill=\"" << stroke << "\">" << method << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace crossmatch
