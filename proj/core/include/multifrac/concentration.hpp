#pragma once

#include "multifrac/ensemble.hpp"

#include <string>
#include <utility>
#include <vector>

namespace multifrac {

// Weighted atoms of a probability density F >= 0 with <F> = 1.
class Density {
public:
    // Validates <F> = 1 within 1e-12; weights must sum to 1.
    Density(std::vector<double> values, std::vector<double> weights);
    // Rescales values so that <F> = 1; weights are normalized first.
    static Density normalized(std::vector<double> values, std::vector<double> weights);
    // F = |f|^p / <|f|^p>, evaluated in the log domain.
    static Density from_ensemble(const IncrementEnsemble& ens, double p);

    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return values_.size(); }
    double mean() const;

private:
    Density() = default;
    std::vector<double> values_;
    std::vector<double> weights_;
};

// Verification record: the checked inequality is lhs <= rhs.
struct ConcentrationReport {
    std::string lemma;
    std::vector<std::pair<std::string, double>> params;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;          // rhs - lhs
    bool pass = false;
    double threshold = 0.0;       // alpha: value at which the set is cut
    double set_measure = 0.0;
    double target_measure = 0.0;
    double captured_fraction = 0.0;
    double bound_constant = 0.0;
    bool sliced = false;          // an atom was partially included
    bool exact = true;            // set measure hit its target
    std::vector<double> membership;  // per-atom included fraction in [0, 1]

    std::vector<std::size_t> indices() const;
};

// ((q-p)/q)^{(q-p)/q} (p/q)^{p/q}, with 0^0 = 1.
double concentration_constant(double q, double p);
// max over x in [0, 1) of x + x ln(1 - x) / H0.
double strong_constant(double H0);

ConcentrationReport concentration_set(const IncrementEnsemble& ens, double q, double p);

struct EntropyResult {
    double H;
    double V;        // e^{-H}
    double shannon;  // V^{2/3} / (2 pi e)
};
EntropyResult entropy(const Density& F);

struct CsiszarKullback {
    double lower;  // <|F - 1|>^2 / 2
    double H;
    double upper;  // <|F - 1|^2>
    bool pass;
};
CsiszarKullback csiszar_kullback_check(const Density& F);

ConcentrationReport weak_concentration(const Density& F, double epsilon);
ConcentrationReport strong_concentration(const Density& F, double H0);

struct DyadicReport {
    Density density;
    std::size_t n;
    double normalization;   // factor applied to reach <F> = 1
    double H;               // numerical <F ln F>
    double H_exact;         // ((n+1)/2) ln 2 - ln n
    double H_rough;         // n ln 2 - ln n
    double V;
    double captured;        // entropy on the measure-V superlevel set
    double ratio;           // captured / H
};
DyadicReport dyadic_counterexample(std::size_t n);

// Band c_lo s_p <= |f| <= c_hi s_p. Checked bound: measure <= K V_p with
// K = c_lo^{-p} for p >= 0 and c_hi^{-p} for p < 0.
ConcentrationReport active_region(const IncrementEnsemble& ens, double p, double c_lo, double c_hi);

struct ActiveQpReport {
    ConcentrationReport measure;  // mu(A) <= sigma^{-p} V_{q,p}; vacuous pass for p <= 0
    ConcentrationReport capture;  // (1 - sigma^{q-p}) <f^q> <= <f^q chi_A>
    bool measure_applicable;
    bool pass() const noexcept { return measure.pass && capture.pass; }
};
// sigma <= 0 selects the default c_{q,p}^{1/(q-p)} (1/2 when p <= 0).
ActiveQpReport active_region_qp(const IncrementEnsemble& ens, double q, double p, double sigma = 0.0);

// A = {|f| >= U0^{1-c} s_p^c}; (1-c) <f^p ln+(f/U0)> <= <f^p ln+(f/U0) chi_A>.
ConcentrationReport log_concentration(const IncrementEnsemble& ens, double p, double U0, double c);

}  // namespace multifrac
