#include "fairassign/admission.hpp"

#include "fairassign/audit.hpp"
#include "fairassign/eating.hpp"
#include "fairassign/error.hpp"
#include "fairassign/lottery.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

namespace fairassign {

std::string to_string(BiasModel model) {
    return model == BiasModel::multiplicative ? "multiplicative" : "additive";
}

BiasModel parse_bias_model(const std::string& text) {
    if (text == "multiplicative") {
        return BiasModel::multiplicative;
    }
    if (text == "additive") {
        return BiasModel::additive;
    }
    throw InputError("unknown bias model '" + text + "' (expected multiplicative or additive)");
}

Distribution Distribution::exponential(double rate) {
    if (!(rate > 0) || !std::isfinite(rate)) {
        throw InputError("exponential rate must be positive and finite");
    }
    return Distribution{Kind::exponential, rate, 0.0};
}

Distribution Distribution::uniform(double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw InputError("uniform distribution needs finite bounds lo < hi");
    }
    return Distribution{Kind::uniform, lo, hi};
}

double Distribution::density(double x) const {
    if (kind == Kind::exponential) {
        return x < 0 ? 0.0 : a * std::exp(-a * x);
    }
    return x >= a && x <= b ? 1.0 / (b - a) : 0.0;
}

std::pair<double, double> Distribution::support(double tail) const {
    if (kind == Kind::exponential) {
        return {0.0, -std::log(tail) / a};
    }
    return {a, b};
}

AdmissionConfig AdmissionConfig::standard(int students, int disadvantaged, int schools, BiasModel model,
                                          double beta, int q, int trials, std::uint64_t seed) {
    if (schools < 1) {
        throw InputError("at least one school is required");
    }
    if (!(beta > 0)) {
        throw InputError("beta must be positive");
    }
    AdmissionConfig config;
    config.students = students;
    config.disadvantaged = disadvantaged;
    config.schools = schools;
    config.capacities.assign(schools, std::max(students, 0) / (schools + 1));
    config.model = model;
    config.beta = beta;
    if (model == BiasModel::multiplicative) {
        config.capability = Distribution::exponential(1.0);
        config.bias = Distribution::exponential(beta);
    } else {
        config.capability = Distribution::uniform(0.0, 2.0);
        config.bias = Distribution::uniform(0.0, beta);
    }
    config.q = q;
    config.trials = trials;
    config.seed = seed;
    config.validate();
    return config;
}

int AdmissionConfig::dummy_capacity() const {
    int used = 0;
    for (int c : capacities) {
        used += c;
    }
    return students - used;
}

void AdmissionConfig::validate() const {
    if (students < 1) {
        throw InputError("student count must be positive");
    }
    if (disadvantaged < 0 || disadvantaged > students) {
        throw InputError("disadvantaged count must lie in [0, students]");
    }
    if (schools < 1 || static_cast<int>(capacities.size()) != schools) {
        throw InputError("need one capacity per school");
    }
    for (int c : capacities) {
        if (c < 0) {
            throw InputError("school capacities must be non-negative");
        }
    }
    if (dummy_capacity() < 0) {
        throw InputError("school capacities exceed the number of students");
    }
    if (!(beta > 0)) {
        throw InputError("beta must be positive");
    }
    if (q < 1) {
        throw InputError("q must be at least 1");
    }
    if (trials < 1) {
        throw InputError("trials must be at least 1");
    }
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::exponential(double rate) { return -std::log1p(-uniform()) / rate; }

double Rng::draw(const Distribution& distribution) {
    switch (distribution.kind) {
    case Distribution::Kind::exponential:
        return exponential(distribution.a);
    case Distribution::Kind::uniform:
        return uniform(distribution.a, distribution.b);
    }
    throw InputError("unsupported distribution");
}

std::uint64_t Rng::below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
        const std::uint64_t x = engine_();
        if (x >= threshold) {
            return x % bound;
        }
    }
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) { return splitmix64(seed ^ splitmix64(stream)); }

std::vector<std::vector<ItemId>> induce_seat_preferences(const std::vector<std::vector<int>>& school_prefs,
                                                         const std::vector<int>& capacities) {
    if (capacities.empty()) {
        throw InputError("capacities must include the dummy school");
    }
    const int real_schools = static_cast<int>(capacities.size()) - 1;
    std::vector<int> offset(capacities.size() + 1, 0);
    for (std::size_t k = 0; k < capacities.size(); ++k) {
        if (capacities[k] < 0) {
            throw InputError("school capacities must be non-negative");
        }
        offset[k + 1] = offset[k] + capacities[k];
    }
    const int seats = offset.back();
    if (seats != static_cast<int>(school_prefs.size())) {
        throw InputError("seat count " + std::to_string(seats) + " differs from student count " +
                         std::to_string(school_prefs.size()));
    }
    std::vector<std::vector<ItemId>> orders;
    orders.reserve(school_prefs.size());
    for (const auto& prefs : school_prefs) {
        if (static_cast<int>(prefs.size()) != real_schools) {
            throw InputError("school preference must rank every real school");
        }
        std::vector<char> seen(real_schools, 0);
        std::vector<ItemId> order;
        order.reserve(seats);
        for (int k : prefs) {
            if (k < 0 || k >= real_schools || seen[k]) {
                throw InputError("school preference is not a permutation");
            }
            seen[k] = 1;
            for (int s = offset[k]; s < offset[k + 1]; ++s) {
                order.push_back(s);
            }
        }
        for (int s = offset[real_schools]; s < seats; ++s) {
            order.push_back(s);
        }
        orders.push_back(std::move(order));
    }
    return orders;
}

Instance admission_instance(const std::vector<std::vector<int>>& school_prefs, const std::vector<int>& capacities) {
    auto orders = induce_seat_preferences(school_prefs, capacities);
    std::vector<std::string> agents;
    for (std::size_t s = 0; s < school_prefs.size(); ++s) {
        agents.push_back("s" + std::to_string(s + 1));
    }
    std::vector<std::string> items;
    const std::size_t real_schools = capacities.size() - 1;
    for (std::size_t k = 0; k < capacities.size(); ++k) {
        for (int j = 1; j <= capacities[k]; ++j) {
            items.push_back(k < real_schools ? "school" + std::to_string(k + 1) + "_seat" + std::to_string(j)
                                             : "dummy_seat" + std::to_string(j));
        }
    }
    return Instance(std::move(agents), std::move(items), std::move(orders));
}

ScoreSet sample_scores(const AdmissionConfig& config, std::uint64_t seed) {
    config.validate();
    Rng rng(stream_seed(seed, 1));
    ScoreSet scores;
    scores.truth.resize(config.students);
    for (auto& x : scores.truth) {
        x = rng.draw(config.capability);
    }
    scores.bias.resize(config.disadvantaged);
    for (auto& b : scores.bias) {
        b = rng.draw(config.bias);
    }
    scores.perceived = scores.truth;
    for (int i = 0; i < config.disadvantaged; ++i) {
        scores.perceived[i] = config.model == BiasModel::multiplicative ? scores.bias[i] * scores.truth[i]
                                                                        : scores.truth[i] + scores.bias[i];
    }
    return scores;
}

PosteriorSampler::PosteriorSampler(std::vector<double> grid, std::vector<double> density)
    : grid_(std::move(grid)), density_(std::move(density)) {
    if (grid_.size() < 2 || grid_.size() != density_.size()) {
        throw InputError("posterior grid needs at least two points and one density value per point");
    }
    double area = 0;
    for (std::size_t k = 1; k < grid_.size(); ++k) {
        area += 0.5 * (density_[k - 1] + density_[k]) * (grid_[k] - grid_[k - 1]);
    }
    if (!(area > 0) || !std::isfinite(area)) {
        throw InputError("posterior density vanishes on the grid (zero normalizer)");
    }
    for (auto& d : density_) {
        d /= area;
    }
    cdf_.assign(grid_.size(), 0.0);
    for (std::size_t k = 1; k < grid_.size(); ++k) {
        cdf_[k] = cdf_[k - 1] + 0.5 * (density_[k - 1] + density_[k]) * (grid_[k] - grid_[k - 1]);
    }
}

double PosteriorSampler::mass() const { return cdf_.back(); }

double PosteriorSampler::sample_at(double u) const {
    const double target = u * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
    if (it == cdf_.begin()) {
        return grid_.front();
    }
    if (it == cdf_.end()) {
        return grid_.back();
    }
    const std::size_t k = static_cast<std::size_t>(it - cdf_.begin());
    const double span = cdf_[k] - cdf_[k - 1];
    const double t = span > 0 ? (target - cdf_[k - 1]) / span : 0.0;
    return grid_[k - 1] + t * (grid_[k] - grid_[k - 1]);
}

double PosteriorSampler::sample(Rng& rng) const { return sample_at(rng.uniform()); }

PosteriorSampler posterior_sampler(double perceived, const AdmissionConfig& config) {
    auto [lo, hi] = config.bias.support(kPosteriorTail);
    const double inf = std::numeric_limits<double>::infinity();
    double dlo = config.capability.kind == Distribution::Kind::uniform ? config.capability.a : 0.0;
    double dhi = config.capability.kind == Distribution::Kind::uniform ? config.capability.b : inf;
    if (config.model == BiasModel::multiplicative) {
        if (!(perceived > 0)) {
            throw InputError("multiplicative bias needs a positive perceived score");
        }
        lo = std::max(lo, perceived / dhi);
        if (dlo > 0) {
            hi = std::min(hi, perceived / dlo);
        }
    } else {
        lo = std::max(lo, perceived - dhi);
        hi = std::min(hi, perceived - dlo);
    }
    if (!(lo < hi)) {
        throw InputError("posterior support is empty (zero normalizer)");
    }
    std::vector<double> grid(kPosteriorGridPoints), density(kPosteriorGridPoints);
    const double step = (hi - lo) / (kPosteriorGridPoints - 1);
    for (int k = 0; k < kPosteriorGridPoints; ++k) {
        const double b = k + 1 == kPosteriorGridPoints ? hi : lo + step * k;
        grid[k] = b;
        const double x = config.model == BiasModel::multiplicative ? perceived / b : perceived - b;
        density[k] = config.bias.density(b) * config.capability.density(x);
    }
    return PosteriorSampler(std::move(grid), std::move(density));
}

SimplePriority ranking_by_score(const std::vector<double>& scores) {
    std::vector<AgentId> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = static_cast<AgentId>(i);
    }
    std::stable_sort(order.begin(), order.end(), [&](AgentId a, AgentId b) { return scores[a] > scores[b]; });
    return SimplePriority(std::move(order));
}

SimplePriority priority_from_bias_samples(const std::vector<double>& perceived, const std::vector<double>& samples,
                                          BiasModel model) {
    if (samples.size() > perceived.size()) {
        throw InputError("more bias samples than students");
    }
    std::vector<double> debiased = perceived;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        debiased[i] = model == BiasModel::multiplicative ? perceived[i] / samples[i] : perceived[i] - samples[i];
    }
    return ranking_by_score(debiased);
}

RandomPriority sample_random_priority(const ScoreSet& scores, const AdmissionConfig& config, std::uint64_t seed) {
    config.validate();
    std::vector<PosteriorSampler> samplers;
    samplers.reserve(config.disadvantaged);
    for (int i = 0; i < config.disadvantaged; ++i) {
        samplers.push_back(posterior_sampler(scores.perceived[i], config));
    }
    Rng rng(stream_seed(seed, 2));
    const Rational weight(1, config.q);
    std::vector<RandomPriority::Entry> entries;
    entries.reserve(config.q);
    std::vector<double> samples(config.disadvantaged);
    for (int j = 0; j < config.q; ++j) {
        for (int i = 0; i < config.disadvantaged; ++i) {
            samples[i] = samplers[i].sample(rng);
        }
        entries.emplace_back(priority_from_bias_samples(scores.perceived, samples, config.model), weight);
    }
    return RandomPriority(std::move(entries));
}

SimplePriority rooney_reorder(const SimplePriority& ranking, const std::vector<char>& disadvantaged, int students,
                              int n_dis) {
    if (static_cast<int>(disadvantaged.size()) != ranking.size() || students != ranking.size()) {
        throw InputError("Rooney reorder needs one flag per ranked student");
    }
    std::vector<AgentId> a, b;
    for (AgentId s : ranking.order()) {
        (disadvantaged[s] ? a : b).push_back(s);
    }
    std::vector<AgentId> out;
    out.reserve(students);
    std::size_t i = 0, j = 0;
    while (i + j < static_cast<std::size_t>(students)) {
        bool take_a;
        if (i == a.size()) {
            take_a = false;
        } else if (j == b.size()) {
            take_a = true;
        } else {
            const bool under = static_cast<long>(i) * students < static_cast<long>(n_dis) * static_cast<long>(i + j + 1);
            take_a = under || ranking.before(a[i], b[j]);
        }
        out.push_back(take_a ? a[i++] : b[j++]);
    }
    return SimplePriority(std::move(out));
}

SimpleAssignment stable_match(const SimplePriority& priority, const Instance& instance) {
    const int n = instance.agent_count();
    const int m = instance.item_count();
    if (priority.size() != n) {
        throw InputError("priority size differs from the student count");
    }
    std::vector<std::size_t> next(n, 0);
    std::vector<AgentId> holder(m, -1);
    std::vector<AgentId> free;
    for (int s = n - 1; s >= 0; --s) {
        free.push_back(s);
    }
    while (!free.empty()) {
        const AgentId s = free.back();
        free.pop_back();
        const ItemId seat = instance.order(s)[next[s]++];
        if (holder[seat] < 0) {
            holder[seat] = s;
        } else if (priority.before(s, holder[seat])) {
            free.push_back(holder[seat]);
            holder[seat] = s;
        } else {
            free.push_back(s);
        }
    }
    std::vector<ItemId> items(n, -1);
    for (int seat = 0; seat < m; ++seat) {
        if (holder[seat] >= 0) {
            items[holder[seat]] = seat;
        }
    }
    SimpleAssignment result(std::move(items), m);
    assert(result == serial_dictatorship(priority, instance));
    return result;
}

namespace {

void add_point_mass(Matrix& p, const SimpleAssignment& f, const Rational& weight) {
    for (int i = 0; i < f.agent_count(); ++i) {
        p[i][f[i]] += weight;
    }
}

Matrix zero_matrix(const Instance& instance) {
    return Matrix(instance.agent_count(), std::vector<Rational>(instance.item_count(), Rational(0)));
}

std::vector<std::vector<int>> sample_school_prefs(const AdmissionConfig& config, std::uint64_t seed) {
    Rng rng(stream_seed(seed, 0));
    std::vector<std::vector<int>> prefs(config.students, std::vector<int>(config.schools));
    for (auto& p : prefs) {
        for (int k = 0; k < config.schools; ++k) {
            p[k] = k;
        }
        for (int k = config.schools - 1; k > 0; --k) {
            std::swap(p[k], p[rng.below(static_cast<std::uint64_t>(k) + 1)]);
        }
    }
    return prefs;
}

}  // namespace

TrialResult run_trial(const AdmissionConfig& config, std::uint64_t seed) {
    config.validate();
    std::vector<int> capacities = config.capacities;
    capacities.push_back(config.dummy_capacity());
    const Instance instance = admission_instance(sample_school_prefs(config, seed), capacities);

    const ScoreSet scores = sample_scores(config, seed);
    const SimplePriority observed = ranking_by_score(scores.perceived);
    const RandomPriority sigma = sample_random_priority(scores, config, seed);
    const Matrix ranks = rank_table(sigma);

    std::vector<char> disadvantaged(config.students, 0);
    for (int i = 0; i < config.disadvantaged; ++i) {
        disadvantaged[i] = 1;
    }
    auto rooney = [&](const SimplePriority& p) {
        return rooney_reorder(p, disadvantaged, config.students, config.disadvantaged);
    };

    std::vector<Matrix> outcomes;
    Matrix naive = zero_matrix(instance);
    add_point_mass(naive, stable_match(observed, instance), Rational(1));
    outcomes.push_back(std::move(naive));

    Matrix random_naive = zero_matrix(instance);
    for (const auto& [p, w] : sigma.entries()) {
        add_point_mass(random_naive, stable_match(p, instance), w);
    }
    outcomes.push_back(std::move(random_naive));

    Matrix rooney_matrix = zero_matrix(instance);
    add_point_mass(rooney_matrix, stable_match(rooney(observed), instance), Rational(1));
    outcomes.push_back(std::move(rooney_matrix));

    Matrix random_rooney = zero_matrix(instance);
    for (const auto& [p, w] : sigma.entries()) {
        add_point_mass(random_rooney, stable_match(rooney(p), instance), w);
    }
    outcomes.push_back(std::move(random_rooney));

    outcomes.push_back(cycle_elimination(instance, sigma).matrix());
    outcomes.push_back(unit_time_eating(instance, sigma).matrix());

    TrialResult result;
    for (auto& p : outcomes) {
        result.envy_pairs.push_back(count_envy_pairs(RandomAssignment(std::move(p)), ranks, instance).count);
    }
    return result;
}

int experiment_threads() {
    if (const char* env = std::getenv("FAIR_ASSIGN_THREADS")) {
        int value = 0;
        const char* end = env + std::char_traits<char>::length(env);
        auto [ptr, ec] = std::from_chars(env, end, value);
        if (ec != std::errc() || ptr != end || value < 0) {
            throw InputError("FAIR_ASSIGN_THREADS must be a non-negative integer");
        }
        if (value > 0) {
            return value;
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<ExperimentRow> run_experiment(const AdmissionConfig& config, int threads) {
    config.validate();
    if (threads <= 0) {
        threads = experiment_threads();
    }
    threads = std::min(threads, config.trials);
    std::vector<TrialResult> results(config.trials);
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    auto work = [&] {
        while (true) {
            const int k = next.fetch_add(1);
            if (k >= config.trials) {
                return;
            }
            try {
                results[k] = run_trial(config, config.seed + static_cast<std::uint64_t>(k));
            } catch (...) {
                std::lock_guard<std::mutex> guard(failure_lock);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(config.trials);
            }
        }
    };
    if (threads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back(work);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::vector<ExperimentRow> rows;
    for (std::size_t a = 0; a < kMechanisms.size(); ++a) {
        ExperimentRow row;
        row.ell = config.schools;
        row.beta = config.beta;
        row.model = config.model;
        row.algorithm = kMechanisms[a];
        for (const auto& r : results) {
            row.total_envy_pairs += r.envy_pairs[a];
        }
        row.trials = config.trials;
        row.q = config.q;
        row.seed = config.seed;
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::string shortest(double value) {
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, ptr);
}

std::string fixed(double value, int digits) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", digits, value);
    return buffer;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
    out << "ell,beta,bias_model,algorithm,mean_envy_pairs,trials,q,seed\n";
    for (const auto& r : rows) {
        out << r.ell << ',' << shortest(r.beta) << ',' << to_string(r.model) << ',' << r.algorithm << ','
            << shortest(r.mean()) << ',' << r.trials << ',' << r.q << ',' << r.seed << '\n';
    }
}

void write_svg(std::ostream& out, const std::vector<ExperimentRow>& rows) {
    struct Group {
        std::string label;
        std::vector<const ExperimentRow*> bars;
    };
    std::vector<Group> groups;
    std::map<std::string, std::size_t> index;
    double top = 0;
    for (const auto& r : rows) {
        const std::string label = to_string(r.model).substr(0, 4) + " l=" + std::to_string(r.ell) +
                                  " b=" + shortest(r.beta);
        auto [it, inserted] = index.emplace(label, groups.size());
        if (inserted) {
            groups.push_back({label, {}});
        }
        groups[it->second].bars.push_back(&r);
        top = std::max(top, r.mean());
    }
    if (top <= 0) {
        top = 1;
    }
    const int bar = 14, gap = 24, plot_height = 240, margin = 40;
    const int per_group = static_cast<int>(kMechanisms.size()) * bar + gap;
    const int width = margin * 2 + std::max<int>(1, static_cast<int>(groups.size())) * per_group;
    const int height = plot_height + margin * 3;
    static const char* colors[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948"};

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
    out << "<text x=\"" << margin << "\" y=\"16\" font-size=\"12\">mean stochastic envy pairs</text>\n";
    for (std::size_t a = 0; a < kMechanisms.size(); ++a) {
        out << "<rect x=\"" << margin + 200 + 50 * a << "\" y=\"6\" width=\"10\" height=\"10\" fill=\""
            << colors[a % 6] << "\"/><text x=\"" << margin + 214 + 50 * a << "\" y=\"15\">" << kMechanisms[a]
            << "</text>\n";
    }
    const int base = margin + plot_height;
    out << "<line x1=\"" << margin << "\" y1=\"" << base << "\" x2=\"" << width - margin << "\" y2=\"" << base
        << "\" stroke=\"black\"/>\n";
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const int x0 = margin + static_cast<int>(g) * per_group;
        for (const ExperimentRow* r : groups[g].bars) {
            const auto pos = std::find(kMechanisms.begin(), kMechanisms.end(), r->algorithm) - kMechanisms.begin();
            const double h = r->mean() / top * plot_height;
            out << "<rect x=\"" << x0 + pos * bar << "\" y=\"" << fixed(base - h, 2) << "\" width=\"" << bar - 2
                << "\" height=\"" << fixed(h, 2) << "\" fill=\"" << colors[pos % 6] << "\"><title>" << r->algorithm
                << ": " << shortest(r->mean()) << "</title></rect>\n";
        }
        out << "<text x=\"" << x0 << "\" y=\"" << base + 14 << "\">" << groups[g].label << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace fairassign
