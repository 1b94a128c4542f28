#include "multifrac/concentration.hpp"

#include "multifrac/error.hpp"
#include "multifrac/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>

namespace multifrac {

namespace {

constexpr double check_tol = 1e-12;

bool holds(double lhs, double rhs) {
    return lhs <= rhs + check_tol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

void finish(ConcentrationReport& r) {
    r.margin = r.rhs - r.lhs;
    r.pass = holds(r.lhs, r.rhs);
}

double weighted_sum(std::span<const double> w, std::span<const double> x) {
    CompensatedSum s;
    for (std::size_t i = 0; i < w.size(); ++i) s.add(w[i] * x[i]);
    return s.value();
}

// Largest-key-first set of the given measure; the atom straddling the target
// is included fractionally.
void superlevel(std::span<const double> key, std::span<const double> weights, double target,
                ConcentrationReport& r) {
    std::vector<std::size_t> order(key.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return key[a] > key[b]; });
    r.membership.assign(key.size(), 0.0);
    r.target_measure = target;
    CompensatedSum acc;
    double threshold = key.empty() ? 0.0 : key[order.front()];
    for (auto i : order) {
        const double have = acc.value();
        if (have >= target) break;
        threshold = key[i];
        if (have + weights[i] <= target) {
            r.membership[i] = 1.0;
            acc.add(weights[i]);
        } else {
            r.membership[i] = (target - have) / weights[i];
            r.sliced = true;
            acc.add(target - have);
            break;
        }
    }
    r.threshold = threshold;
    r.set_measure = acc.value();
    r.exact = std::abs(r.set_measure - target) <= 1e-12;
}

struct LogMoments {
    double ln_m;
    double mean_log;
};

LogMoments log_moments_at(const IncrementEnsemble& ens, double p) {
    const double grid[] = {p};
    const auto tab = moments(ens, grid);
    if (!std::isfinite(tab.ln_moments[0]))
        throw Error(ErrorKind::domain, "moment of order " + std::to_string(p) + " is not finite");
    return {tab.ln_moments[0], tab.mean_log[0]};
}

// |f|^p / <|f|^p> per atom, 0 for zero atoms at p > 0.
std::vector<double> relative_power(const IncrementEnsemble& ens, double p, double ln_m) {
    std::vector<double> out(ens.size());
    for (std::size_t i = 0; i < ens.size(); ++i) {
        const double f = ens.magnitudes[i];
        if (p == 0.0) out[i] = std::exp(-ln_m);
        else if (f <= zero_floor) out[i] = 0.0;
        else out[i] = std::exp(p * std::log(f) - ln_m);
    }
    return out;
}

double plogp(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

std::vector<std::size_t> ConcentrationReport::indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < membership.size(); ++i)
        if (membership[i] > 0.0) out.push_back(i);
    return out;
}

Density::Density(std::vector<double> values, std::vector<double> weights)
    : values_(std::move(values)), weights_(std::move(weights)) {
    if (values_.empty() || values_.size() != weights_.size())
        throw Error(ErrorKind::argument, "density: values and weights must be non-empty and of equal length");
    CompensatedSum wsum;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] >= 0.0) || !std::isfinite(values_[i]) || !(weights_[i] >= 0.0))
            throw Error(ErrorKind::argument, "density: values and weights must be finite and non-negative");
        wsum.add(weights_[i]);
    }
    if (std::abs(wsum.value() - 1.0) > 1e-12) throw Error(ErrorKind::argument, "density: weights must sum to 1");
    if (std::abs(mean() - 1.0) > 1e-12) throw Error(ErrorKind::argument, "density: <F> must equal 1");
}

Density Density::normalized(std::vector<double> values, std::vector<double> weights) {
    if (values.empty() || values.size() != weights.size())
        throw Error(ErrorKind::argument, "density: values and weights must be non-empty and of equal length");
    CompensatedSum wsum;
    for (double w : weights) wsum.add(w);
    if (!(wsum.value() > 0.0)) throw Error(ErrorKind::argument, "density: zero total weight");
    for (double& w : weights) w /= wsum.value();
    const double m = weighted_sum(weights, values);
    if (!(m > 0.0) || !std::isfinite(m)) throw Error(ErrorKind::argument, "density: mean must be positive and finite");
    for (double& v : values) v /= m;
    return Density(std::move(values), std::move(weights));
}

Density Density::from_ensemble(const IncrementEnsemble& ens, double p) {
    ens.validate();
    const auto lm = log_moments_at(ens, p);
    Density d;
    d.values_ = relative_power(ens, p, lm.ln_m);
    d.weights_ = ens.weights;
    // Remove the last rounding so <F> = 1 holds to working precision.
    const double m = d.mean();
    for (double& v : d.values_) v /= m;
    return d;
}

double Density::mean() const { return weighted_sum(weights_, values_); }

double concentration_constant(double q, double p) {
    if (!(q > 0.0) || p < 0.0 || p >= q) throw Error(ErrorKind::argument, "c_{q,p} needs 0 <= p < q");
    const double x = (q - p) / q;
    const double y = p / q;
    return std::exp(plogp(x) + plogp(y));
}

double strong_constant(double H0) {
    if (!(H0 > 0.0)) throw Error(ErrorKind::argument, "strong constant needs H0 > 0");
    const auto f = [H0](double x) { return x + x * std::log1p(-x) / H0; };
    const double x = golden_section_max(f, 0.0, 1.0 - 1e-15, 1e-10);
    return f(x);
}

ConcentrationReport concentration_set(const IncrementEnsemble& ens, double q, double p) {
    if (!(p >= 0.0 && p < q)) throw Error(ErrorKind::argument, "concentration set needs 0 <= p < q");
    ens.validate();
    const auto mq = log_moments_at(ens, q);
    const auto mp = log_moments_at(ens, p);
    const double lnV = (p * mq.ln_m - q * mp.ln_m) / (p - q);
    const double V = std::min(1.0, std::exp(lnV));
    if (lnV > 1e-12) throw Error(ErrorKind::internal_consistency, "V_{q,p} exceeds 1");

    ConcentrationReport r;
    r.lemma = "concentration_set";
    r.params = {{"q", q}, {"p", p}, {"V", V}};
    superlevel(ens.magnitudes, ens.weights, V, r);
    const auto fq = relative_power(ens, q, mq.ln_m);
    std::vector<double> wa(ens.size());
    for (std::size_t i = 0; i < ens.size(); ++i) wa[i] = ens.weights[i] * r.membership[i];
    r.captured_fraction = weighted_sum(wa, fq);
    r.bound_constant = concentration_constant(q, p);
    r.lhs = 1.0 - r.bound_constant;
    r.rhs = r.captured_fraction;
    finish(r);
    return r;
}

EntropyResult entropy(const Density& F) {
    CompensatedSum h;
    for (std::size_t i = 0; i < F.size(); ++i) h.add(F.weights()[i] * plogp(F.values()[i]));
    const double H = h.value();
    const double V = std::exp(-H);
    return {H, V, std::pow(V, 2.0 / 3.0) / (2.0 * std::numbers::pi * std::numbers::e)};
}

CsiszarKullback csiszar_kullback_check(const Density& F) {
    CompensatedSum l1, l2;
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double d = std::abs(F.values()[i] - 1.0);
        l1.add(F.weights()[i] * d);
        l2.add(F.weights()[i] * d * d);
    }
    CsiszarKullback r{0.5 * l1.value() * l1.value(), entropy(F).H, l2.value(), false};
    r.pass = holds(r.lower, r.H) && holds(r.H, r.upper);
    return r;
}

namespace {

ConcentrationReport entropy_capture(const Density& F, double target, const char* lemma) {
    ConcentrationReport r;
    r.lemma = lemma;
    superlevel(F.values(), F.weights(), target, r);
    CompensatedSum cap;
    for (std::size_t i = 0; i < F.size(); ++i)
        cap.add(F.weights()[i] * r.membership[i] * plogp(F.values()[i]));
    r.rhs = cap.value();
    return r;
}

}  // namespace

ConcentrationReport weak_concentration(const Density& F, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorKind::argument, "weak concentration needs 0 < eps < 1");
    const auto e = entropy(F);
    auto r = entropy_capture(F, std::pow(e.V, 1.0 - epsilon), "weak_concentration");
    r.params = {{"epsilon", epsilon}, {"H", e.H}, {"V", e.V}};
    r.bound_constant = epsilon;
    r.lhs = epsilon * e.H;
    r.captured_fraction = e.H > 0.0 ? r.rhs / e.H : 1.0;
    finish(r);
    return r;
}

ConcentrationReport strong_concentration(const Density& F, double H0) {
    const auto e = entropy(F);
    if (e.H > H0 * (1.0 + 1e-12) + 1e-15)
        throw Error(ErrorKind::precondition, "strong concentration needs H <= H0 (H = " + std::to_string(e.H) + ")");
    auto r = entropy_capture(F, e.V, "strong_concentration");
    r.bound_constant = strong_constant(H0);
    r.params = {{"H0", H0}, {"H", e.H}, {"V", e.V}};
    r.lhs = (1.0 - r.bound_constant) * e.H;
    r.captured_fraction = e.H > 0.0 ? r.rhs / e.H : 1.0;
    finish(r);
    return r;
}

DyadicReport dyadic_counterexample(std::size_t n) {
    if (n < 2 || n > 1000) throw Error(ErrorKind::argument, "dyadic counterexample needs 2 <= n <= 1000");
    std::vector<double> values, weights;
    const double dn = static_cast<double>(n);
    for (std::size_t i = 1; i <= n; ++i) {
        values.push_back(std::ldexp(1.0, static_cast<int>(i)) / dn);
        weights.push_back(std::ldexp(1.0, -static_cast<int>(i)));
    }
    values.push_back(0.0);  // leftover interval
    weights.push_back(std::ldexp(1.0, -static_cast<int>(n)));
    const double raw_mean = weighted_sum(weights, values);
    auto F = Density::normalized(values, weights);
    const auto e = entropy(F);
    const auto cap = entropy_capture(F, e.V, "dyadic");
    return DyadicReport{F,
                        n,
                        1.0 / raw_mean,
                        e.H,
                        0.5 * (dn + 1.0) * std::numbers::ln2 - std::log(dn),
                        dn * std::numbers::ln2 - std::log(dn),
                        e.V,
                        cap.rhs,
                        cap.rhs / e.H};
}

ConcentrationReport active_region(const IncrementEnsemble& ens, double p, double c_lo, double c_hi) {
    if (!(c_lo > 0.0 && c_hi > c_lo)) throw Error(ErrorKind::argument, "active region needs 0 < c_lo < c_hi");
    ens.validate();
    const auto lm = log_moments_at(ens, p);
    const double s = std::exp(lm.mean_log);
    const double V = std::exp(lm.ln_m - p * lm.mean_log);
    ConcentrationReport r;
    r.lemma = "active_region";
    r.threshold = s;
    r.membership.assign(ens.size(), 0.0);
    CompensatedSum mu;
    for (std::size_t i = 0; i < ens.size(); ++i) {
        const double f = ens.magnitudes[i];
        if (f >= c_lo * s && f <= c_hi * s) {
            r.membership[i] = 1.0;
            mu.add(ens.weights[i]);
        }
    }
    r.set_measure = mu.value();
    r.target_measure = V;
    r.bound_constant = p >= 0.0 ? std::pow(c_lo, -p) : std::pow(c_hi, -p);
    r.params = {{"p", p}, {"c_lo", c_lo}, {"c_hi", c_hi}, {"s_p", s}, {"V_p", V}};
    r.lhs = r.set_measure;
    r.rhs = r.bound_constant * V;
    r.captured_fraction = r.set_measure;
    finish(r);
    return r;
}

ActiveQpReport active_region_qp(const IncrementEnsemble& ens, double q, double p, double sigma) {
    if (!(p < q)) throw Error(ErrorKind::argument, "A_{q,p} needs p < q");
    ens.validate();
    // The optimal constant is below 1 only for p > 0; otherwise fall back to 1/2.
    if (sigma <= 0.0) sigma = p > 0.0 ? std::pow(concentration_constant(q, p), 1.0 / (q - p)) : 0.5;
    if (!(sigma > 0.0 && sigma < 1.0)) throw Error(ErrorKind::argument, "A_{q,p} needs 0 < sigma < 1");
    const auto mq = log_moments_at(ens, q);
    const auto mp = log_moments_at(ens, p);
    const double ln_s = (mq.ln_m - mp.ln_m) / (q - p);
    const double lnV = (p * mq.ln_m - q * mp.ln_m) / (p - q);
    const double cut = std::log(sigma) + ln_s;

    ActiveQpReport out{};
    auto& m = out.measure;
    m.lemma = "active_region_qp_measure";
    m.threshold = std::exp(cut);
    m.membership.assign(ens.size(), 0.0);
    CompensatedSum mu;
    for (std::size_t i = 0; i < ens.size(); ++i) {
        const double f = ens.magnitudes[i];
        if (f > zero_floor && std::log(f) >= cut) {
            m.membership[i] = 1.0;
            mu.add(ens.weights[i]);
        } else if (f <= zero_floor && cut == -std::numeric_limits<double>::infinity()) {
            m.membership[i] = 1.0;
            mu.add(ens.weights[i]);
        }
    }
    m.set_measure = mu.value();
    m.target_measure = std::exp(lnV);
    m.params = {{"q", q}, {"p", p}, {"sigma", sigma}, {"s_qp", std::exp(ln_s)}, {"V_qp", std::exp(lnV)}};
    out.measure_applicable = p > 0.0;
    m.bound_constant = std::pow(sigma, -p);
    m.lhs = m.set_measure;
    m.rhs = out.measure_applicable ? m.bound_constant * m.target_measure : 1.0;
    m.captured_fraction = m.set_measure;
    finish(m);

    auto& c = out.capture;
    c = m;
    c.lemma = "active_region_qp_capture";
    const auto fq = relative_power(ens, q, mq.ln_m);
    std::vector<double> wa(ens.size());
    for (std::size_t i = 0; i < ens.size(); ++i) wa[i] = ens.weights[i] * m.membership[i];
    c.captured_fraction = weighted_sum(wa, fq);
    c.bound_constant = std::pow(sigma, q - p);
    c.lhs = 1.0 - c.bound_constant;
    c.rhs = c.captured_fraction;
    finish(c);
    return out;
}

ConcentrationReport log_concentration(const IncrementEnsemble& ens, double p, double U0, double c) {
    if (!(c > 0.0 && c < 1.0) || !(U0 > 0.0))
        throw Error(ErrorKind::argument, "ln+ concentration needs 0 < c < 1 and U0 > 0");
    ens.validate();
    const auto lm = log_moments_at(ens, p);
    const double ln_cut = (1.0 - c) * std::log(U0) + c * lm.mean_log;
    const auto fp = relative_power(ens, p, lm.ln_m);
    ConcentrationReport r;
    r.lemma = "log_concentration";
    r.threshold = std::exp(ln_cut);
    r.membership.assign(ens.size(), 0.0);
    CompensatedSum total, inside, mu;
    for (std::size_t i = 0; i < ens.size(); ++i) {
        const double f = ens.magnitudes[i];
        const double lp = f > zero_floor ? std::max(0.0, std::log(f / U0)) : 0.0;
        const double term = ens.weights[i] * fp[i] * lp;
        total.add(term);
        if (f > zero_floor && std::log(f) >= ln_cut) {
            r.membership[i] = 1.0;
            inside.add(term);
            mu.add(ens.weights[i]);
        }
    }
    r.set_measure = mu.value();
    r.target_measure = r.set_measure;
    r.bound_constant = c;
    r.params = {{"p", p}, {"U0", U0}, {"c", c}, {"s_p", std::exp(lm.mean_log)}};
    // Both sides are divided by <f^p>.
    r.lhs = (1.0 - c) * total.value();
    r.rhs = inside.value();
    r.captured_fraction = total.value() > 0.0 ? r.rhs / total.value() : 1.0;
    finish(r);
    return r;
}

}  // namespace multifrac
