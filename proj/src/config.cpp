#include "pco/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include "json.hpp"
#include "pco/csv.hpp"
#include "pco/wavelet.hpp"

namespace pco {

namespace {

using nlohmann::json;

// A parsed integer carrying a minus sign; get<unsigned> would wrap it.
bool negative_integer(const json& v) {
    return v.is_number_integer() && !v.is_number_unsigned();
}

template <typename T>
struct is_unsigned_vector : std::false_type {};
template <typename U>
struct is_unsigned_vector<std::vector<U>> : std::bool_constant<std::is_unsigned_v<U>> {};

// Strict object reader: every key must be consumed exactly once.
class BlockReader {
public:
    BlockReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j.is_object()) throw config_error("config block '" + path_ + "' must be an object");
    }

    ~BlockReader() = default;

    template <typename T>
    void read(const char* key, T& out) {
        if (auto it = j_.find(key); it != j_.end()) {
            get(*it, key, out);
            seen_.insert(key);
        }
    }

    template <typename T>
    void read_optional(const char* key, std::optional<T>& out) {
        if (auto it = j_.find(key); it != j_.end()) {
            if (!it->is_null()) {
                T v{};
                get(*it, key, v);
                out = v;
            }
            seen_.insert(key);
        }
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key()))
                throw config_error("unknown config key '" + qualify(it.key()) + "'");
    }

    const json* child(const char* key) {
        if (auto it = j_.find(key); it != j_.end()) {
            seen_.insert(key);
            return &*it;
        }
        return nullptr;
    }

    std::string qualify(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

private:
    template <typename T>
    void get(const json& v, const char* key, T& out) {
        if constexpr (std::is_unsigned_v<T>) {
            if (negative_integer(v))
                throw config_error("config key '" + qualify(key) + "' must be >= 0");
        } else if constexpr (is_unsigned_vector<T>::value) {
            if (v.is_array())
                for (const auto& e : v)
                    if (negative_integer(e))
                        throw config_error("config key '" + qualify(key) +
                                           "' entries must be >= 0");
        }
        try {
            out = v.get<T>();
        } catch (const json::exception&) {
            throw config_error("config key '" + qualify(key) + "' has the wrong type");
        }
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void parse_signal(const json& j, SignalConfig& out) {
    BlockReader r(j, "signal");
    r.read("kind", out.kind);
    r.read("s", out.s);
    r.read("r", out.r);
    r.read("R", out.R);
    r.read_optional("top_level", out.top_level);
    r.read_optional("seed", out.seed);
    r.read("n", out.n);
    r.read("basis", out.basis);
    r.finish();
}

void parse_noise(const json& j, NoiseConfig& out) {
    BlockReader r(j, "noise");
    r.read("kind", out.kind);
    r.read("epsilon", out.epsilon);
    r.read("sigma", out.sigma);
    r.finish();
}

void parse_penalty(const json& j, PenaltyConfig& out) {
    BlockReader r(j, "penalty");
    r.read("p", out.p);
    r.read("weights", out.weights);
    r.read("strategies", out.strategies);
    r.read("threshold", out.threshold);
    r.read_optional("q", out.q);
    r.read_optional("a", out.a);
    r.read_optional("K_I", out.K_I);
    r.read_optional("K_S", out.K_S);
    r.finish();
}

void parse_sweep(const json& j, SweepConfig& out) {
    BlockReader r(j, "sweep");
    r.read("epsilons", out.epsilons);
    r.read("replicates", out.replicates);
    r.read("dims", out.dims);
    r.read("x_grid", out.x_grid);
    r.read("confidence", out.confidence);
    r.finish();
}

void parse_io(const json& j, IoConfig& out) {
    BlockReader r(j, "io");
    r.read("input", out.input);
    r.read("output_prefix", out.output_prefix);
    r.read("tag", out.tag);
    r.finish();
}

json dump_signal(const SignalConfig& c) {
    json j{{"kind", c.kind}, {"s", c.s},        {"r", c.r},
           {"R", c.R},       {"n", c.n},        {"basis", c.basis}};
    j["top_level"] = c.top_level ? json(*c.top_level) : json(nullptr);
    j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
    return j;
}

json dump_penalty(const PenaltyConfig& c) {
    json j{{"p", c.p},
           {"weights", c.weights},
           {"strategies", c.strategies},
           {"threshold", c.threshold}};
    j["q"] = c.q ? json(*c.q) : json(nullptr);
    j["a"] = c.a ? json(*c.a) : json(nullptr);
    j["K_I"] = c.K_I ? json(*c.K_I) : json(nullptr);
    j["K_S"] = c.K_S ? json(*c.K_S) : json(nullptr);
    return j;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw config_error(msg);
}

} // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig cfg;
    BlockReader r(j, "");
    r.read("command", cfg.command);
    r.read("seed", cfg.seed);
    r.read("exec", cfg.exec);
    r.read("moments_file", cfg.moments_file);
    if (const json* b = r.child("signal")) parse_signal(*b, cfg.signal);
    if (const json* b = r.child("noise")) parse_noise(*b, cfg.noise);
    if (const json* b = r.child("penalty")) parse_penalty(*b, cfg.penalty);
    if (const json* b = r.child("sweep")) parse_sweep(*b, cfg.sweep);
    if (const json* b = r.child("io")) parse_io(*b, cfg.io);
    r.finish();
    return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw config_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return from_json_text(buf.str());
}

std::string ExperimentConfig::canonical_json(int indent) const {
    json j;
    j["command"] = command;
    j["seed"] = seed;
    j["exec"] = exec;
    j["moments_file"] = moments_file;
    j["signal"] = dump_signal(signal);
    j["noise"] = json{{"kind", noise.kind}, {"epsilon", noise.epsilon}, {"sigma", noise.sigma}};
    j["penalty"] = dump_penalty(penalty);
    j["sweep"] = json{{"epsilons", sweep.epsilons},
                      {"replicates", sweep.replicates},
                      {"dims", sweep.dims},
                      {"x_grid", sweep.x_grid},
                      {"confidence", sweep.confidence}};
    j["io"] = json{{"input", io.input}, {"output_prefix", io.output_prefix}, {"tag", io.tag}};
    return j.dump(indent);
}

std::uint64_t ExperimentConfig::fingerprint() const { return csv::fnv1a(canonical_json()); }

WeightScheme ExperimentConfig::weight_scheme() const {
    const std::string w = lower(penalty.weights);
    if (w == "constant") return WeightScheme::constant();
    if (w == "dyadic") return WeightScheme::dyadic(penalty.p);
    throw config_error("penalty.weights must be 'constant' or 'dyadic', got '" +
                       penalty.weights + "'");
}

SignalShape ExperimentConfig::signal_shape() const {
    return signal_shape_from_name(signal.kind);
}

std::vector<StrategyTag> ExperimentConfig::strategy_tags() const {
    require(!penalty.strategies.empty(), "penalty.strategies must not be empty");
    std::vector<StrategyTag> tags;
    for (const auto& name : penalty.strategies)
        tags.push_back(strategy_tag_from_config(name, penalty.threshold));
    return tags;
}

StrategyTag strategy_tag_from_config(const std::string& name, double threshold) {
    const std::string n = lower(name);
    if (n == "h") return StrategyTag::h();
    if (n == "i") return StrategyTag::i();
    if (n == "i-steep" || n == "i_steep") return StrategyTag::i_steep();
    if (n == "s") return StrategyTag::s();
    if (n == "flat") return StrategyTag::flat();
    if (n == "threshold") {
        require(threshold > 0.0, "penalty.threshold must be > 0 for the threshold strategy");
        return StrategyTag::threshold(threshold);
    }
    throw config_error("unknown strategy '" + name +
                       "' (expected H, I, I-steep, S, flat or threshold)");
}

void ExperimentConfig::validate() const {
    static const std::set<std::string> commands = {"estimate",      "simulate", "rates",
                                                   "concentration", "regress",  "calibrate"};
    require(commands.count(command) == 1, "unknown command '" + command + "'");

    noise_kind();
    require(noise.epsilon >= 0.0, "noise.epsilon must be >= 0");
    require(noise.sigma >= 0.0, "noise.sigma must be >= 0");

    require(penalty.p >= 1.0, "penalty.p must be >= 1");
    weight_scheme();
    strategy_tags();
    require(!penalty.q || *penalty.q > 0.0, "penalty.q must be > 0");
    require(!penalty.a || *penalty.a > 0.0, "penalty.a must be > 0");
    require(!penalty.K_I || *penalty.K_I > 0.0, "penalty.K_I must be > 0");
    require(!penalty.K_S || *penalty.K_S > 0.0, "penalty.K_S must be > 0");

    require(!signal.top_level || *signal.top_level >= 0, "signal.top_level must be >= 0");

    if (command == "simulate" || command == "rates") {
        require(signal.kind == "dense" || signal.kind == "sparse" || signal.kind == "mixed",
                "signal.kind must be dense, sparse or mixed for '" + command + "'");
        ball().validate();
    }
    if (command == "rates") {
        require(!sweep.epsilons.empty(), "sweep.epsilons must not be empty");
        for (double e : sweep.epsilons) require(e > 0.0, "sweep.epsilons must be > 0");
        require(sweep.replicates >= 2, "sweep.replicates must be >= 2 for rates");
    }
    if (command == "concentration" || command == "calibrate") {
        require(!sweep.dims.empty(), "sweep.dims must not be empty");
        for (auto d : sweep.dims) require(d >= 1, "sweep.dims entries must be >= 1");
        require(!sweep.x_grid.empty(), "sweep.x_grid must not be empty");
        for (double x : sweep.x_grid) require(x > 0.0, "sweep.x_grid entries must be > 0");
        require(sweep.replicates >= 1, "sweep.replicates must be >= 1");
        require(sweep.confidence > 0.0 && sweep.confidence < 1.0,
                "sweep.confidence must lie in (0, 1)");
    }
    if (command == "estimate")
        require(!io.input.empty(), "io.input must name the observation CSV for 'estimate'");
    if (command == "regress") {
        if (io.input.empty()) {
            require(signal.kind == "blocks" || signal.kind == "bumps" ||
                        signal.kind == "ramp" || signal.kind == "constant",
                    "signal.kind must name a test function (blocks, bumps, ramp, constant) "
                    "when io.input is empty");
            require(signal.n >= 2 && is_power_of_two(signal.n),
                    "signal.n must be a power of two >= 2");
        }
        basis_from_name(signal.basis);
    }
    require(exec == "serial" || exec == "parallel", "exec must be 'serial' or 'parallel'");
    require(!io.output_prefix.empty(), "io.output_prefix must not be empty");
}

} // namespace pco
