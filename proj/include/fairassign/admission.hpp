#pragma once

#include "fairassign/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace fairassign {

enum class BiasModel { multiplicative, additive };

std::string to_string(BiasModel model);
BiasModel parse_bias_model(const std::string& text);

struct Distribution {
    enum class Kind { exponential, uniform };
    Kind kind = Kind::exponential;
    double a = 1.0;  // rate for exponential, lower bound for uniform
    double b = 0.0;  // upper bound for uniform

    static Distribution exponential(double rate);
    static Distribution uniform(double lo, double hi);

    double density(double x) const;
    /// Smallest interval holding all but `tail` of the mass.
    std::pair<double, double> support(double tail) const;
};

struct AdmissionConfig {
    int students = 35;
    int disadvantaged = 10;
    int schools = 2;
    std::vector<int> capacities;  // one per school; the dummy school takes the rest
    BiasModel model = BiasModel::multiplicative;
    double beta = 0.5;
    Distribution capability = Distribution::exponential(1.0);
    Distribution bias = Distribution::exponential(0.5);
    int q = 200;
    int trials = 20;
    std::uint64_t seed = 0;

    /// Experiment defaults: floor(N/(l+1)) seats per school and the
    /// capability/bias pair that goes with the bias model.
    static AdmissionConfig standard(int students, int disadvantaged, int schools, BiasModel model, double beta,
                                    int q, int trials, std::uint64_t seed);

    int dummy_capacity() const;
    void validate() const;
};

/// Seedable generator with hand-rolled transforms so draws are identical on
/// every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform();  // [0, 1)
    double uniform(double lo, double hi);
    double exponential(double rate);
    double draw(const Distribution& distribution);
    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);
/// Independent sub-stream of a trial seed.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

/// Seat-level preference orders. `school_prefs[s]` ranks the real schools
/// 0..l-1 best first; `capacities` has one entry per real school followed by
/// the dummy school, which every student ranks last. Seats of school k are
/// items offset_k .. offset_k + c_k - 1, lower seat index preferred.
std::vector<std::vector<ItemId>> induce_seat_preferences(const std::vector<std::vector<int>>& school_prefs,
                                                         const std::vector<int>& capacities);

Instance admission_instance(const std::vector<std::vector<int>>& school_prefs, const std::vector<int>& capacities);

struct ScoreSet {
    std::vector<double> truth;
    std::vector<double> bias;       // one per disadvantaged student
    std::vector<double> perceived;
};

/// Students 0..n_dis-1 are the disadvantaged ones.
ScoreSet sample_scores(const AdmissionConfig& config, std::uint64_t seed);

class PosteriorSampler {
public:
    PosteriorSampler(std::vector<double> grid, std::vector<double> density);

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& density() const { return density_; }
    const std::vector<double>& cdf() const { return cdf_; }
    /// Trapezoid integral of the normalized density.
    double mass() const;
    double sample(Rng& rng) const;
    double sample_at(double u) const;

private:
    std::vector<double> grid_;
    std::vector<double> density_;
    std::vector<double> cdf_;
};

inline constexpr int kPosteriorGridPoints = 10000;
inline constexpr double kPosteriorTail = 1e-6;

/// Posterior of one disadvantaged student's bias given the perceived score:
/// f_B(b) f_D(x/b) (multiplicative) or f_B(b) f_D(x - b) (additive).
PosteriorSampler posterior_sampler(double perceived, const AdmissionConfig& config);

/// Ranking by descending score, ties to the lower index.
SimplePriority ranking_by_score(const std::vector<double>& scores);

/// Debiased ranking for one set of bias samples (one per disadvantaged student).
SimplePriority priority_from_bias_samples(const std::vector<double>& perceived, const std::vector<double>& samples,
                                          BiasModel model);

RandomPriority sample_random_priority(const ScoreSet& scores, const AdmissionConfig& config, std::uint64_t seed);

/// `disadvantaged[a]` marks the disadvantaged agents; n_dis is their count.
SimplePriority rooney_reorder(const SimplePriority& ranking, const std::vector<char>& disadvantaged, int students,
                              int n_dis);

/// Student-proposing deferred acceptance where every seat ranks students by `priority`.
SimpleAssignment stable_match(const SimplePriority& priority, const Instance& instance);

inline const std::vector<std::string> kMechanisms = {"N", "RN", "R", "RR", "CE", "UTE"};

struct TrialResult {
    std::vector<long> envy_pairs;  // indexed like kMechanisms
};

TrialResult run_trial(const AdmissionConfig& config, std::uint64_t seed);

struct ExperimentRow {
    int ell = 0;
    double beta = 0;
    BiasModel model = BiasModel::multiplicative;
    std::string algorithm;
    long total_envy_pairs = 0;
    int trials = 0;
    int q = 0;
    std::uint64_t seed = 0;

    double mean() const { return trials == 0 ? 0.0 : static_cast<double>(total_envy_pairs) / trials; }
};

/// Trial k uses seed + k. Trials run on up to `threads` workers (0 = the
/// FAIR_ASSIGN_THREADS environment variable, else hardware concurrency).
std::vector<ExperimentRow> run_experiment(const AdmissionConfig& config, int threads = 0);

int experiment_threads();

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
void write_svg(std::ostream& out, const std::vector<ExperimentRow>& rows);

}  // namespace fairassign
