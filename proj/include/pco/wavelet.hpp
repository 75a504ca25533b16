#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pco/selection.hpp"

/*
 * Equispaced regression front-end.
 *
 *   X_i = f(i/n) + sigma eta_i,  i = 1..n,  t_i = i/n in (0,1]
 *   Y_jk = (1/n) sum_i X_i phi_jk(t_i),  epsilon = sigma/sqrt(n)
 *
 * phi_jk are L2[0,1]-orthonormal wavelets; on the dyadic grid the discrete
 * vectors phi_jk(t_.)/sqrt(n) are exactly orthonormal for Haar, so the
 * coefficient map is the orthonormal transform divided by sqrt(n).
 *
 * Haar convention (half-open-left blocks): the scaling function is 1 on
 * (0,1]; psi is +1 on (0,1/2] and -1 on (1/2,1]; sample i belongs to block
 * k of level j iff k n/2^j < i <= (k+1) n/2^j.
 *
 * The optional periodized Daubechies family is the discrete periodized
 * orthogonal filter bank (order = vanishing moments); it has no pointwise
 * evaluator, so reconstruction with it needs a power-of-two grid.
 */

namespace pco {

struct RegressionSample {
    std::vector<double> x; // responses X_1..X_n
    double sigma = 0.0;

    std::size_t n() const { return x.size(); }
    void validate() const {
        if (x.size() < 2 || !is_power_of_two(x.size()))
            throw config_error("sample size must be a power of two >= 2");
        if (sigma < 0.0) throw config_error("noise scale sigma must be >= 0");
    }
};

enum class WaveletFamily { Haar, PeriodizedDaubechies };

struct WaveletBasis {
    WaveletFamily family = WaveletFamily::Haar;
    int order = 2; // vanishing moments, periodized family only

    static WaveletBasis haar() { return {WaveletFamily::Haar, 0}; }
    static WaveletBasis daubechies(int order) { return {WaveletFamily::PeriodizedDaubechies, order}; }
};

WaveletBasis basis_from_name(const std::string& name);
std::string basis_name(const WaveletBasis& basis);

// phi_jk(t) for the Haar family, t in (0,1].
double haar_value(DyadicIndex idx, double t);

// Largest usable top level for a sample of size n: N = 2^{J+1} = n.
int default_top_level(std::size_t n);

// O(n) pyramid of block sums; epsilon = sigma/sqrt(n).
ObservationSet forward_coeffs(const RegressionSample& sample, const WaveletBasis& basis, int J);

// Reference O(n N) evaluation of the same sums (Haar only).
ObservationSet forward_coeffs_direct(const RegressionSample& sample, int J);

// Discrete coefficients (1/n) sum_i f(t_i) phi_jk(t_i).
SignalSequence theta_of_f(const std::function<double(double)>& f, const WaveletBasis& basis,
                          int J, std::size_t n);

// Selection over strategies H, I, S on the embedded coefficients, with the
// strategy-I tail exponent steepened to -3p/2 when p > 2. Weights are the
// dyadic scheme for spec.p (the sequence mirror of the L_p norm).
std::pair<SignalSequence, SelectionResult> pco_regress(const RegressionSample& sample,
                                                       const WaveletBasis& basis, int J,
                                                       const PenaltySpec& spec);

// Values of sum theta_jk phi_jk at t = i/G, i = 1..G. Any G >= 1 for Haar;
// power-of-two G >= coefficient count for the periodized family.
std::vector<double> reconstruct(const SignalSequence& theta, const WaveletBasis& basis,
                                std::size_t grid_size);

struct FunctionRisk {
    double lp_pow = 0.0;       // (1/G) sum |f_hat - f|^p, Riemann on the grid
    double besov_bridge = 0.0; // B^0_{p, min(p,2)} norm of the difference's coefficients
};

FunctionRisk lp_function_risk(const std::vector<double>& f_hat,
                              const std::function<double(double)>& f, double p);

// ( sum_j [ 2^{j(1/2 - 1/p)} (sum_k |theta_jk|^p)^{1/p} ]^q )^{1/q}, q = min(p, 2).
double besov_bridge_norm(const SignalSequence& coeffs, double p);

// blocks, bumps, ramp, constant.
std::function<double(double)> named_test_function(const std::string& name);

} // namespace pco
