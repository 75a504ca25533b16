#include "pco/moments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pco {

double kappa_from(double p, double sigma_p, double c1, double c2) {
    if (sigma_p <= 0.0) throw config_error("sigma_p must be > 0");
    return c2 + c1 * std::max(1.0, c1 / (2.0 * std::pow(sigma_p, p)));
}

double sigma_p_gaussian(double p) {
    if (p < 1.0) throw std::domain_error("sigma_p requires p >= 1");
    const double pi = 3.141592653589793238462643383279502884;
    return std::pow(std::exp2(p / 2.0) * std::tgamma((p + 1.0) / 2.0) / std::sqrt(pi),
                    1.0 / p);
}

double sigma_p_closed_form(NoiseKind kind, double p) {
    if (p < 1.0) throw std::domain_error("sigma_p requires p >= 1");
    switch (kind) {
        case NoiseKind::StandardGaussian: return sigma_p_gaussian(p);
        case NoiseKind::Rademacher: return 1.0;
        case NoiseKind::UniformScaled:
            // E|xi|^p = 3^{p/2}/(p+1) for xi uniform on [-sqrt3, sqrt3].
            return std::sqrt(3.0) * std::pow(p + 1.0, -1.0 / p);
    }
    throw config_error("unknown noise kind tag");
}

long long MomentsTable::key_of(double p) { return std::llround(p * 1e6); }

void MomentsTable::insert(NoiseKind kind, const NoiseMoments& m, const std::string& date) {
    rows_[{static_cast<int>(kind), key_of(m.p)}] = Entry{kind, m, date};
}

void MomentsTable::merge(const MomentsTable& other) {
    for (const auto& [k, e] : other.rows_) rows_[k] = e;
}

bool MomentsTable::has(NoiseKind kind, double p) const {
    return rows_.count({static_cast<int>(kind), key_of(p)}) > 0;
}

NoiseMoments MomentsTable::get(NoiseKind kind, double p) const {
    auto it = rows_.find({static_cast<int>(kind), key_of(p)});
    if (it == rows_.end())
        throw uncalibrated_error("no moment constants for " + noise_kind_name(kind) +
                                 " at p = " + std::to_string(p) +
                                 "; run the calibrate subcommand or pass --moments-file");
    return it->second.moments;
}

std::vector<MomentsTable::Entry> MomentsTable::entries() const {
    std::vector<Entry> out;
    out.reserve(rows_.size());
    for (const auto& [k, e] : rows_) out.push_back(e);
    return out;
}

MomentsTable MomentsTable::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open moments file '" + path + "'");
    MomentsTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (lineno == 1 && line.rfind("distribution", 0) == 0) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 7)
            throw config_error("moments file '" + path + "' line " + std::to_string(lineno) +
                               ": expected 7 fields, got " + std::to_string(fields.size()));
        try {
            NoiseMoments m;
            const NoiseKind kind = noise_kind_from_name(fields[0]);
            m.p = std::stod(fields[1]);
            m.sigma_p = std::stod(fields[2]);
            m.c1 = std::stod(fields[3]);
            m.c2 = std::stod(fields[4]);
            m.kappa_p = std::stod(fields[5]);
            table.insert(kind, m, fields[6]);
        } catch (const config_error&) {
            throw;
        } catch (const std::exception& e) {
            throw config_error("moments file '" + path + "' line " + std::to_string(lineno) +
                               ": " + e.what());
        }
    }
    return table;
}

void MomentsTable::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write moments file '" + path + "'");
    out << "distribution,p,sigma_p,c1,c2,kappa_p,calibration_date\n";
    char buf[256];
    for (const auto& [k, e] : rows_) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n",
                      noise_kind_name(e.kind).c_str(), e.moments.p, e.moments.sigma_p,
                      e.moments.c1, e.moments.c2, e.moments.kappa_p, e.date.c_str());
        out << buf;
    }
}

namespace {

NoiseMoments make_moments(NoiseKind kind, double p, double c1, double c2) {
    NoiseMoments m;
    m.p = p;
    m.sigma_p = sigma_p_closed_form(kind, p);
    m.c1 = c1;
    m.c2 = c2;
    m.kappa_p = kappa_from(p, m.sigma_p, c1, c2);
    return m;
}

} // namespace

MomentsTable MomentsTable::builtin() {
    MomentsTable t;
    const auto G = NoiseKind::StandardGaussian;
    const auto R = NoiseKind::Rademacher;
    const auto U = NoiseKind::UniformScaled;
    // Known Gaussian pairs.
    t.insert(G, make_moments(G, 1.0, std::sqrt(2.0), 0.0), "builtin");
    t.insert(G, make_moments(G, 2.0, 2.0, 2.0), "builtin");
    // Frozen output of the calibrate subcommand (lattice step 0.05,
    // D in {10,20,50,100,200}, x in {1,1.5,2,3,4,5}, 2*10^5 replicates,
    // 99% confidence, seed 20260823). Regenerate with:
    //   pco calibrate --dist <d> --p <p> --replicates 200000 --seed 20260823
    t.insert(G, make_moments(G, 1.5, 1.05, 0.05), "2026-08-23");
    t.insert(G, make_moments(G, 3.0, 3.85, 0.75), "2026-08-23");
    t.insert(G, make_moments(G, 4.0, 9.90, 2.30), "2026-08-23");
    t.insert(G, make_moments(G, 5.0, 18.55, 11.75), "2026-08-23");
    t.insert(R, make_moments(R, 1.0, 0.05, 0.05), "2026-08-23");
    t.insert(R, make_moments(R, 1.5, 0.05, 0.05), "2026-08-23");
    t.insert(R, make_moments(R, 2.0, 0.05, 0.05), "2026-08-23");
    t.insert(R, make_moments(R, 3.0, 0.05, 0.05), "2026-08-23");
    t.insert(R, make_moments(R, 4.0, 0.05, 0.05), "2026-08-23");
    t.insert(U, make_moments(U, 1.0, 0.55, 0.05), "2026-08-23");
    t.insert(U, make_moments(U, 1.5, 0.75, 0.05), "2026-08-23");
    t.insert(U, make_moments(U, 2.0, 1.00, 0.05), "2026-08-23");
    t.insert(U, make_moments(U, 3.0, 1.65, 0.05), "2026-08-23");
    t.insert(U, make_moments(U, 4.0, 2.65, 0.05), "2026-08-23");
    return t;
}

NoiseMoments default_moments(double p, NoiseKind kind, const MomentsTable& table) {
    if (p < 1.0) throw config_error("loss index p must be >= 1");
    if (kind == NoiseKind::StandardGaussian) {
        if (p == 1.0) return make_moments(kind, 1.0, std::sqrt(2.0), 0.0);
        if (p == 2.0) return make_moments(kind, 2.0, 2.0, 2.0);
    }
    return table.get(kind, p);
}

NoiseMoments default_moments(double p, NoiseKind kind) {
    return default_moments(p, kind, MomentsTable::builtin());
}

} // namespace pco
