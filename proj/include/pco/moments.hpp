#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pco/noise.hpp"

/*
 * Noise-moment constants entering the penalties:
 *   sigma_p = (E|xi|^p)^{1/p}
 *   (c1, c2) such that |Z - E Z| <= c1 sqrt(D x) + c2 D^{(1-p/2)_+} x^{p/2}
 *             holds with probability >= 1 - 2 e^{-x} for Z = sum of D terms |xi|^p
 *   kappa_p = c2 + c1 max(1, c1 / (2 sigma_p^p))
 *
 * Gaussian (c1, c2) at p = 1 and p = 2 are known: (sqrt 2, 0) and (2, 2).
 * Every other pair ships as a frozen entry produced by the `calibrate`
 * subcommand (empirical lattice search, see concentration); the table can
 * be extended or overridden from a CSV file.
 */

namespace pco {

struct NoiseMoments {
    double p = 2.0;
    double sigma_p = 1.0;
    double c1 = 2.0;
    double c2 = 2.0;
    double kappa_p = 4.0;
};

double kappa_from(double p, double sigma_p, double c1, double c2);

// (2^{p/2} Gamma((p+1)/2) / sqrt(pi))^{1/p}; p >= 1.
double sigma_p_gaussian(double p);

// Exact sigma_p for all three supported distributions (Rademacher: 1,
// uniform on [-sqrt3, sqrt3]: sqrt3 (p+1)^{-1/p}).
double sigma_p_closed_form(NoiseKind kind, double p);

class MomentsTable {
public:
    // Built-in entries: the known Gaussian pairs plus frozen calibrated
    // values for the (distribution, p) pairs the experiments use.
    static MomentsTable builtin();

    // CSV columns: distribution,p,sigma_p,c1,c2,kappa_p,calibration_date.
    static MomentsTable load_csv(const std::string& path);
    void save_csv(const std::string& path) const;

    void insert(NoiseKind kind, const NoiseMoments& m, const std::string& date = "");
    // Merge other's entries over this table's.
    void merge(const MomentsTable& other);

    bool has(NoiseKind kind, double p) const;
    // Throws uncalibrated_error when no entry exists.
    NoiseMoments get(NoiseKind kind, double p) const;

    struct Entry {
        NoiseKind kind;
        NoiseMoments moments;
        std::string date;
    };
    std::vector<Entry> entries() const;

private:
    static long long key_of(double p);
    std::map<std::pair<int, long long>, Entry> rows_;
};

// Paper pairs for Gaussian p in {1, 2}; table lookup otherwise.
NoiseMoments default_moments(double p, NoiseKind kind, const MomentsTable& table);
NoiseMoments default_moments(double p, NoiseKind kind);

} // namespace pco
