// SPDX-License-Identifier: Apache-2.0

#include "isac/config.hpp"
#include "isac/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

using nlohmann::json;

namespace
{
    // Reads typed members of one JSON object and rejects keys that were never asked for.
    class Block
    {
    public:
        Block(const json &j, std::string path) : j_(j), path_(std::move(path))
        {
            if (!j_.is_object())
                throw isac::ConfigError("'" + path_ + "' must be an object.");
        }

        bool has(const std::string &key)
        {
            known_.insert(key);
            return j_.contains(key) && !j_.at(key).is_null();
        }

        std::string name(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

        const json &at(const std::string &key)
        {
            known_.insert(key);
            if (!j_.contains(key))
                throw isac::ConfigError("Missing required key '" + name(key) + "'.");
            return j_.at(key);
        }

        double number(const std::string &key, double fallback)
        {
            if (!has(key))
                return fallback;
            const auto &v = j_.at(key);
            if (!v.is_number())
                throw isac::ConfigError("'" + name(key) + "' must be a number.");
            double x = v.get<double>();
            if (!std::isfinite(x))
                throw isac::ConfigError("'" + name(key) + "' must be finite.");
            return x;
        }

        int integer(const std::string &key, int fallback)
        {
            if (!has(key))
                return fallback;
            const auto &v = j_.at(key);
            if (!v.is_number_integer())
                throw isac::ConfigError("'" + name(key) + "' must be an integer.");
            return v.get<int>();
        }

        std::uint64_t unsigned64(const std::string &key, std::uint64_t fallback)
        {
            if (!has(key))
                return fallback;
            const auto &v = j_.at(key);
            if (!v.is_number_unsigned())
                throw isac::ConfigError("'" + name(key) + "' must be a non-negative integer.");
            return v.get<std::uint64_t>();
        }

        bool boolean(const std::string &key, bool fallback)
        {
            if (!has(key))
                return fallback;
            const auto &v = j_.at(key);
            if (!v.is_boolean())
                throw isac::ConfigError("'" + name(key) + "' must be true or false.");
            return v.get<bool>();
        }

        std::string text(const std::string &key, const std::string &fallback)
        {
            if (!has(key))
                return fallback;
            const auto &v = j_.at(key);
            if (!v.is_string())
                throw isac::ConfigError("'" + name(key) + "' must be a string.");
            return v.get<std::string>();
        }

        isac::Vec3 vec3(const std::string &key, isac::Vec3 fallback)
        {
            if (!has(key))
                return fallback;
            return to_vec3(j_.at(key), name(key));
        }

        static isac::Vec3 to_vec3(const json &v, const std::string &where)
        {
            if (!v.is_array() || v.size() != 3)
                throw isac::ConfigError("'" + where + "' must be an array of three numbers.");
            for (const auto &e : v)
                if (!e.is_number())
                    throw isac::ConfigError("'" + where + "' must be an array of three numbers.");
            isac::Vec3 out{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
            if (!isac::is_finite(out))
                throw isac::ConfigError("'" + where + "' must be finite.");
            return out;
        }

        Block child(const std::string &key)
        {
            return Block(at(key), name(key));
        }

        void finish() const
        {
            for (auto it = j_.begin(); it != j_.end(); ++it)
                if (!known_.count(it.key()))
                    throw isac::ConfigError("Unknown key '" + name(it.key()) + "'.");
        }

    private:
        const json &j_;
        std::string path_;
        std::set<std::string> known_;
    };

    template <class F>
    auto wrap_parse(const std::string &key, F &&f)
    {
        try
        {
            return f();
        }
        catch (const isac::ConfigError &)
        {
            throw;
        }
        catch (const std::invalid_argument &e)
        {
            throw isac::ConfigError("Invalid value for '" + key + "': " + e.what());
        }
    }

    isac::ArraySpec parse_array(Block b)
    {
        isac::ArraySpec a;
        a.pattern = b.text("pattern", a.pattern);
        a.rows = b.integer("rows", a.rows);
        a.columns = b.integer("columns", a.columns);
        a.spacing_wavelengths = b.number("spacing_wavelengths", a.spacing_wavelengths);
        a.slant_deg = b.number("slant_deg", a.slant_deg);
        b.finish();
        if (a.pattern != "isotropic" && a.pattern != "directional")
            throw isac::ConfigError("'" + b.name("pattern") + "' must be isotropic or directional.");
        if (a.rows < 1 || a.columns < 1)
            throw isac::ConfigError("'" + b.name("rows") + "' and columns must be at least 1.");
        if (a.spacing_wavelengths < 0.0)
            throw isac::ConfigError("'" + b.name("spacing_wavelengths") + "' cannot be negative.");
        return a;
    }

    isac::Station parse_station(Block b, bool base_station)
    {
        isac::Station s;
        s.position = Block::to_vec3(b.at("position"), b.name("position"));
        s.velocity = b.vec3("velocity", {});
        if (base_station && b.has("sensing_position"))
            s.sensing_position = b.vec3("sensing_position", {});
        if (b.has("array"))
            s.array = parse_array(b.child("array"));
        b.finish();
        if (!(s.position.z > 0.0))
            throw isac::ConfigError("'" + b.name("position") + "' height must be positive.");
        if (s.sensing_position && !(s.sensing_position->z > 0.0))
            throw isac::ConfigError("'" + b.name("sensing_position") + "' height must be positive.");
        return s;
    }

    std::vector<isac::Station> parse_stations(Block &parent, const std::string &key, bool base_station)
    {
        std::vector<isac::Station> out;
        if (!parent.has(key))
            return out;
        const json &arr = parent.at(key);
        if (!arr.is_array())
            throw isac::ConfigError("'" + parent.name(key) + "' must be an array.");
        for (std::size_t i = 0; i < arr.size(); ++i)
            out.push_back(parse_station(Block(arr[i], parent.name(key) + "[" + std::to_string(i) + "]"), base_station));
        return out;
    }

    const char *class_names[] = {"pedestrian", "vehicle", "environment"};

    json array_json(const isac::ArraySpec &a)
    {
        return {{"pattern", a.pattern}, {"rows", a.rows}, {"columns", a.columns},
                {"spacing_wavelengths", a.spacing_wavelengths}, {"slant_deg", a.slant_deg}};
    }

    json vec_json(const isac::Vec3 &v)
    {
        return json::array({v.x, v.y, v.z});
    }

    json station_json(const isac::Station &s, bool base_station)
    {
        json j = {{"position", vec_json(s.position)}, {"velocity", vec_json(s.velocity)}, {"array", array_json(s.array)}};
        if (base_station)
            j["sensing_position"] = s.sensing_position ? vec_json(*s.sensing_position) : json(nullptr);
        return j;
    }

    std::string mapping_name(isac::MappingMode m)
    {
        return m == isac::MappingMode::per_cluster ? "per_cluster" : "per_ray";
    }

    std::string anchor_name(isac::PerceptionAnchor a)
    {
        return a == isac::PerceptionAnchor::fbs ? "fbs" : "lbs";
    }
}

void isac::RunConfig::validate() const
{
    try
    {
        scenario.validate();
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    try
    {
        layout.validate();
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(std::string("layout: ") + e.what());
    }

    auto need = [](bool ok, const std::string &msg)
    {
        if (!ok)
            throw ConfigError(msg);
    };
    const auto &m = model;
    need(m.evolution.a > 0.0, "'model.evolution.a' must be positive.");
    need(m.evolution.b > 0.0, "'model.evolution.b' must be positive.");
    need(m.evolution.knee > 0.0, "'model.evolution.knee' must be positive.");
    need(m.newborn.variance > 0.0, "'model.newborn.variance' must be positive.");
    need(m.newborn.mean >= 0.0 && m.newborn.mean <= 1.0, "'model.newborn.mean' must lie in [0, 1].");
    need(m.sensing_ratio > 0.0, "'model.sensing_ratio' must be positive.");
    need(m.d_min > 0.0, "'model.d_min' must be positive.");
    need(m.max_retries >= 0, "'model.max_retries' cannot be negative.");
    need(!m.global_cap || *m.global_cap >= 1, "'model.global_cap' must be at least 1.");
    need(std::isfinite(m.tx_power_dbm), "'model.tx_power_dbm' must be finite.");
    need(m.snapshot_time_s >= 0.0, "'model.snapshot_time_s' cannot be negative.");
    try
    {
        m.rcs.validate();
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(std::string("model.rcs: ") + e.what());
    }
    LspStatistics probe{};
    for (const auto &[k, v] : m.lsp_overrides)
        wrap_parse("model.lsp_overrides." + k, [&]
                   { set_lsp_field(probe, k, v); return 0; });

    need(run.drops >= 1, "'run.drops' must be at least 1.");
    need(run.parallel >= 1, "'run.parallel' must be at least 1.");
    for (const auto &e : run.emit)
        need(e == "clusters" || e == "cir" || e == "stats" || e == "cdf",
             "'run.emit' entries must be clusters, cir, stats or cdf (got '" + e + "').");

    need(validation.drops >= 1, "'validation.drops' must be at least 1.");
    need(validation.ds_p90_min_s >= 0.0 && validation.ds_p90_max_s > validation.ds_p90_min_s,
         "'validation.ds_p90_min_s' and 'ds_p90_max_s' must form a band.");
}

isac::RunConfig isac::parse_config(const std::string &text)
{
    json root;
    try
    {
        root = json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(std::string("Config is not valid JSON: ") + e.what());
    }

    RunConfig c;
    Block top(root, "");

    {
        Block b = top.child("scenario");
        c.scenario.kind = wrap_parse("scenario.kind", [&]
                                     { return parse_scenario_kind(b.text("kind", "UMi")); });
        c.scenario.carrier_frequency_hz = b.number("carrier_frequency_hz", c.scenario.carrier_frequency_hz);
        c.scenario.bandwidth_hz = b.number("bandwidth_hz", c.scenario.bandwidth_hz);
        b.finish();
    }
    {
        Block b = top.child("layout");
        c.layout.base_stations = parse_stations(b, "base_stations", true);
        c.layout.terminals = parse_stations(b, "terminals", false);
        b.finish();
        if (c.layout.base_stations.empty())
            throw ConfigError("'layout.base_stations' needs at least one base station.");
    }
    if (top.has("model"))
    {
        Block b = top.child("model");
        auto &m = c.model;
        if (b.has("evolution"))
        {
            Block e = b.child("evolution");
            m.evolution.a = e.number("a", m.evolution.a);
            m.evolution.b = e.number("b", m.evolution.b);
            m.evolution.knee = e.number("knee", m.evolution.knee);
            e.finish();
        }
        if (b.has("newborn"))
        {
            Block e = b.child("newborn");
            m.newborn.mean = e.number("mean", m.newborn.mean);
            m.newborn.variance = e.number("variance", m.newborn.variance);
            e.finish();
        }
        m.sensing_ratio = b.number("sensing_ratio", m.sensing_ratio);
        m.d_min = b.number("d_min", m.d_min);
        m.max_retries = b.integer("max_retries", m.max_retries);
        if (b.has("rcs"))
        {
            Block r = b.child("rcs");
            if (r.has("mixture"))
            {
                Block mix = r.child("mixture");
                for (std::size_t i = 0; i < 3; ++i)
                    m.rcs.mixture[i] = mix.number(class_names[i], m.rcs.mixture[i]);
                mix.finish();
            }
            if (r.has("ranges"))
            {
                Block rg = r.child("ranges");
                for (std::size_t i = 0; i < 3; ++i)
                {
                    if (!rg.has(class_names[i]))
                        continue;
                    const json &v = rg.at(class_names[i]);
                    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
                        throw ConfigError("'" + rg.name(class_names[i]) + "' must be [min, max] in dBsm.");
                    m.rcs.ranges[i] = {v[0].get<double>(), v[1].get<double>()};
                }
                rg.finish();
            }
            r.finish();
        }
        m.ut_rcs_class = wrap_parse("model.ut_rcs_class", [&]
                                    { return parse_rcs_class(b.text("ut_rcs_class", "pedestrian")); });
        if (b.has("lsp_overrides"))
        {
            const json &o = b.at("lsp_overrides");
            if (!o.is_object())
                throw ConfigError("'model.lsp_overrides' must be an object.");
            for (auto it = o.begin(); it != o.end(); ++it)
            {
                if (!it.value().is_number())
                    throw ConfigError("'model.lsp_overrides." + it.key() + "' must be a number.");
                m.lsp_overrides[it.key()] = it.value().get<double>();
            }
        }
        m.pathloss = wrap_parse("model.pathloss", [&]
                                { return parse_pathloss_model(b.text("pathloss", "free_space")); });
        {
            std::string v = b.text("mapping", "per_cluster");
            if (v == "per_cluster")
                m.mapping = MappingMode::per_cluster;
            else if (v == "per_ray")
                m.mapping = MappingMode::per_ray;
            else
                throw ConfigError("'model.mapping' must be per_cluster or per_ray.");
        }
        {
            std::string v = b.text("perception_anchor", "fbs");
            if (v == "fbs")
                m.perception_anchor = PerceptionAnchor::fbs;
            else if (v == "lbs")
                m.perception_anchor = PerceptionAnchor::lbs;
            else
                throw ConfigError("'model.perception_anchor' must be fbs or lbs.");
        }
        m.cross_link_perception = b.boolean("cross_link_perception", m.cross_link_perception);
        if (b.has("global_cap"))
            m.global_cap = b.integer("global_cap", 0);
        {
            std::string v = b.text("condition", "auto");
            if (v != "auto")
                m.condition = wrap_parse("model.condition", [&]
                                         { return parse_link_condition(v); });
        }
        m.tx_power_dbm = b.number("tx_power_dbm", m.tx_power_dbm);
        m.snapshot_time_s = b.number("snapshot_time_s", m.snapshot_time_s);
        b.finish();
    }
    if (top.has("run"))
    {
        Block b = top.child("run");
        c.run.seed = b.unsigned64("seed", c.run.seed);
        c.run.drops = b.integer("drops", c.run.drops);
        c.run.parallel = b.integer("parallel", c.run.parallel);
        if (b.has("emit"))
        {
            const json &e = b.at("emit");
            if (!e.is_array())
                throw ConfigError("'run.emit' must be an array of strings.");
            c.run.emit.clear();
            for (const auto &v : e)
            {
                if (!v.is_string())
                    throw ConfigError("'run.emit' must be an array of strings.");
                c.run.emit.push_back(v.get<std::string>());
            }
        }
        b.finish();
    }
    if (top.has("validation"))
    {
        Block b = top.child("validation");
        c.validation.drops = b.integer("drops", c.validation.drops);
        c.validation.ds_p90_min_s = b.number("ds_p90_min_s", c.validation.ds_p90_min_s);
        c.validation.ds_p90_max_s = b.number("ds_p90_max_s", c.validation.ds_p90_max_s);
        b.finish();
    }
    top.finish();

    c.validate();
    return c;
}

isac::RunConfig isac::load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("Cannot read config file '" + path + "'.");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string isac::canonical_json(const RunConfig &c)
{
    json j;
    j["scenario"] = {{"kind", to_string(c.scenario.kind)},
                     {"carrier_frequency_hz", c.scenario.carrier_frequency_hz},
                     {"bandwidth_hz", c.scenario.bandwidth_hz}};

    json bs = json::array(), ut = json::array();
    for (const auto &s : c.layout.base_stations)
        bs.push_back(station_json(s, true));
    for (const auto &s : c.layout.terminals)
        ut.push_back(station_json(s, false));
    j["layout"] = {{"base_stations", bs}, {"terminals", ut}};

    const auto &m = c.model;
    json mix, ranges;
    for (std::size_t i = 0; i < 3; ++i)
    {
        mix[class_names[i]] = m.rcs.mixture[i];
        ranges[class_names[i]] = json::array({m.rcs.ranges[i].min_dbsm, m.rcs.ranges[i].max_dbsm});
    }
    json overrides = json::object();
    for (const auto &[k, v] : m.lsp_overrides)
        overrides[k] = v;
    j["model"] = {
        {"evolution", {{"a", m.evolution.a}, {"b", m.evolution.b}, {"knee", m.evolution.knee}}},
        {"newborn", {{"mean", m.newborn.mean}, {"variance", m.newborn.variance}}},
        {"sensing_ratio", m.sensing_ratio},
        {"d_min", m.d_min},
        {"max_retries", m.max_retries},
        {"rcs", {{"mixture", mix}, {"ranges", ranges}}},
        {"ut_rcs_class", to_string(m.ut_rcs_class)},
        {"lsp_overrides", overrides},
        {"pathloss", to_string(m.pathloss)},
        {"mapping", mapping_name(m.mapping)},
        {"perception_anchor", anchor_name(m.perception_anchor)},
        {"cross_link_perception", m.cross_link_perception},
        {"global_cap", m.global_cap ? json(*m.global_cap) : json(nullptr)},
        {"condition", m.condition ? to_string(*m.condition) : std::string("auto")},
        {"tx_power_dbm", m.tx_power_dbm},
        {"snapshot_time_s", m.snapshot_time_s},
    };
    j["run"] = {{"seed", c.run.seed}, {"drops", c.run.drops}, {"parallel", c.run.parallel}, {"emit", c.run.emit}};
    j["validation"] = {{"drops", c.validation.drops},
                       {"ds_p90_min_s", c.validation.ds_p90_min_s},
                       {"ds_p90_max_s", c.validation.ds_p90_max_s}};
    return j.dump(2);
}

std::uint64_t isac::config_hash(const RunConfig &config)
{
    json j = json::parse(canonical_json(config));
    j["run"].erase("seed");
    j["run"].erase("parallel");
    j["run"].erase("emit");
    const std::string s = j.dump();

    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s)
    {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string isac::hash_string(std::uint64_t hash)
{
    static const char digits[] = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, hash >>= 4)
        s[static_cast<std::size_t>(i)] = digits[hash & 0xF];
    return s;
}

isac::RunConfig isac::preset_validation()
{
    RunConfig c;
    c.scenario = {ScenarioKind::UMi, 28.0e9, 1.0e9};
    Station bs;
    bs.position = {0.0, 0.0, 5.0};
    Station ut;
    ut.position = {8.0, 8.0, 1.5};
    c.layout.base_stations = {bs};
    c.layout.terminals = {ut};
    c.run.seed = 2024;
    c.run.drops = 500;
    c.validation = {500, 10e-9, 500e-9};
    return c;
}

isac::RunConfig isac::preset_multilink(ScenarioKind kind)
{
    RunConfig c;
    c.scenario = {kind, 28.0e9, 1.0e9};
    Station bs1, bs2;
    bs1.position = {100.0, 100.0, 20.0};
    bs2.position = {150.0, 150.0, 35.0};
    Station u1, u2, u3;
    u1.position = {50.0, 50.0, 1.5};
    u2.position = {20.0, 180.0, 3.5};
    u3.position = {170.0, 30.0, 1.0};
    c.layout.base_stations = {bs1, bs2};
    c.layout.terminals = {u1, u2, u3};
    c.model.pathloss = PathlossModel::three_gpp;
    c.run.seed = 7;
    c.run.drops = 10;
    return c;
}
