// SPDX-License-Identifier: Apache-2.0
//
// rdmud - reduced-dimension multiuser detection toolkit
// Copyright (C) 2026 The rdmud authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rdmud/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "rdmud/error.hpp"

namespace rdmud {

using nlohmann::json;

namespace {

class Diagnostics
{
public:
    void add(const std::string& path, const std::string& what) { lines_.push_back(path + ": " + what); }
    bool empty() const noexcept { return lines_.empty(); }
    std::size_t size() const noexcept { return lines_.size(); }
    const std::vector<std::string>& lines() const noexcept { return lines_; }

    void add_line(const std::string& line)
    {
        if (std::find(lines_.begin(), lines_.end(), line) == lines_.end())
            lines_.push_back(line);
    }

    [[noreturn]] void raise() const
    {
        std::string msg = "invalid configuration:";
        for (const auto& l : lines_)
            msg += "\n  " + l;
        throw ConfigError(msg);
    }

private:
    std::vector<std::string> lines_;
};

// Typed access to one JSON object; every key read is remembered so that the
// leftovers can be reported as unknown.
class ObjectReader
{
public:
    ObjectReader(const json& j, std::string path, Diagnostics& diag) : j_(j), path_(std::move(path)), diag_(diag)
    {
        if (!j_.is_object())
            diag_.add(path_, "expected an object");
    }

    ObjectReader(const ObjectReader&) = delete;
    ObjectReader& operator=(const ObjectReader&) = delete;

    ~ObjectReader()
    {
        if (!j_.is_object())
            return;
        for (const auto& [key, value] : j_.items())
            if (!seen_.contains(key))
                diag_.add(child(key), "unknown key");
    }

    std::string child(const std::string& key) const { return path_ + "." + key; }

    const json* find(const std::string& key)
    {
        seen_.insert(key);
        if (!j_.is_object())
            return nullptr;
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void ignore(const std::string& key) { seen_.insert(key); }

    template <class T>
    void integer(const std::string& key, T& out, long long lo, long long hi)
    {
        const json* v = find(key);
        if (!v)
            return;
        if (!v->is_number_integer())
        {
            diag_.add(child(key), "expected an integer");
            return;
        }
        const long long x = v->get<long long>();
        if (x < lo || x > hi)
        {
            diag_.add(child(key), fmt::format("value {} is outside [{}, {}]", x, lo, hi));
            return;
        }
        out = static_cast<T>(x);
    }

    template <class T>
    void integer(const std::string& key, std::optional<T>& out, long long lo, long long hi)
    {
        T tmp{};
        const bool present = find(key) != nullptr;
        const auto before = count();
        integer(key, tmp, lo, hi);
        if (present && count() == before)
            out = tmp;
    }

    void seed(const std::string& key, std::uint64_t& out)
    {
        const json* v = find(key);
        if (!v)
            return;
        if (!v->is_number_unsigned())
        {
            diag_.add(child(key), "expected a nonnegative integer seed");
            return;
        }
        out = v->get<std::uint64_t>();
    }

    void seed(const std::string& key, std::optional<std::uint64_t>& out)
    {
        if (find(key) == nullptr)
            return;
        std::uint64_t tmp = 0;
        const auto before = count();
        seed(key, tmp);
        if (count() == before)
            out = tmp;
    }

    void number(const std::string& key, double& out, double lo, double hi, bool open_lo = false)
    {
        const json* v = find(key);
        if (!v)
            return;
        if (!v->is_number())
        {
            diag_.add(child(key), "expected a number");
            return;
        }
        const double x = v->get<double>();
        if (!(x >= lo && x <= hi) || (open_lo && x == lo))
        {
            diag_.add(child(key), fmt::format("value {} is outside {}{}, {}]", x, open_lo ? "(" : "[", lo, hi));
            return;
        }
        out = x;
    }

    void string(const std::string& key, std::string& out)
    {
        const json* v = find(key);
        if (!v)
            return;
        if (!v->is_string())
        {
            diag_.add(child(key), "expected a string");
            return;
        }
        out = v->get<std::string>();
    }

    void boolean(const std::string& key, bool& out)
    {
        const json* v = find(key);
        if (!v)
            return;
        if (!v->is_boolean())
        {
            diag_.add(child(key), "expected true or false");
            return;
        }
        out = v->get<bool>();
    }

    void numbers(const std::string& key, std::vector<double>& out)
    {
        const json* v = find(key);
        if (!v)
            return;
        if (!v->is_array())
        {
            diag_.add(child(key), "expected an array of numbers");
            return;
        }
        out.clear();
        for (std::size_t i = 0; i < v->size(); ++i)
        {
            if (!(*v)[i].is_number())
            {
                diag_.add(fmt::format("{}[{}]", child(key), i), "expected a number");
                continue;
            }
            out.push_back((*v)[i].get<double>());
        }
    }

    void error(const std::string& key, const std::string& what) { diag_.add(child(key), what); }
    void error_here(const std::string& what) { diag_.add(path_, what); }
    const std::string& path() const noexcept { return path_; }
    std::size_t count() const noexcept { return diag_.size(); }

private:
    const json& j_;
    std::string path_;
    Diagnostics& diag_;
    std::set<std::string> seen_;
};

constexpr long long max_users = 1 << 20;

MatrixConfig read_matrix(const json& j, const std::string& path, Diagnostics& diag)
{
    MatrixConfig m;
    ObjectReader r(j, path, diag);
    std::string kind = to_string(m.kind);
    r.string("kind", kind);
    try
    {
        m.kind = parse_matrix_kind(kind);
    }
    catch (const InvalidArgument& e)
    {
        r.error("kind", e.what());
    }
    r.integer("rows", m.rows, 1, max_users);
    r.seed("seed", m.seed);
    r.integer("search", m.search, 1, 100000000);
    r.string("path", m.path);
    r.boolean("normalize", m.normalize);
    if (m.kind == MatrixKind::file && m.path.empty())
        r.error("path", "required for kind \"file\"");
    return m;
}

GramConfig read_gram(const json& j, const std::string& path, Diagnostics& diag)
{
    GramConfig g;
    ObjectReader r(j, path, diag);
    std::string kind = "identity";
    r.string("kind", kind);
    if (kind == "identity")
        g.kind = GramKind::identity;
    else if (kind == "gold")
        g.kind = GramKind::gold;
    else if (kind == "spectrum")
        g.kind = GramKind::spectrum;
    else if (kind == "file")
        g.kind = GramKind::file;
    else
        r.error("kind", fmt::format("unknown Gram kind \"{}\" (expected identity, gold, spectrum or file)", kind));
    r.integer("L", g.gold_length, 1, max_users);
    r.numbers("eigenvalues", g.eigenvalues);
    std::vector<double> range;
    r.numbers("linspace", range);
    if (!range.empty())
    {
        if (range.size() != 2 || !(range[0] > 0.0 && range[0] <= range[1]))
            r.error("linspace", "expected [lo, hi] with 0 < lo <= hi");
        else
            g.linspace = std::pair{range[0], range[1]};
    }
    r.seed("seed", g.seed);
    r.string("path", g.path);
    if (g.kind == GramKind::spectrum && g.eigenvalues.empty() && !g.linspace)
        r.error_here("spectrum Gram needs \"eigenvalues\" or \"linspace\"");
    if (g.kind == GramKind::file && g.path.empty())
        r.error("path", "required for kind \"file\"");
    return g;
}

AmplitudeRule read_amplitudes(const json& j, const std::string& path, Diagnostics& diag)
{
    AmplitudeRule a;
    if (j.is_number())
    {
        a = AmplitudeRule::constant(j.get<double>());
    }
    else
    {
        ObjectReader r(j, path, diag);
        std::string kind = "constant";
        r.string("kind", kind);
        if (kind == "constant")
        {
            double v = 1.0;
            r.number("value", v, -1e300, 1e300);
            a = AmplitudeRule::constant(v);
        }
        else if (kind == "uniform")
        {
            double lo = 1.0, hi = 1.5;
            r.number("lo", lo, 0.0, 1e300, true);
            r.number("hi", hi, 0.0, 1e300, true);
            a = AmplitudeRule::uniform(lo, hi);
        }
        else
        {
            r.error("kind", fmt::format("unknown amplitude rule \"{}\" (expected constant or uniform)", kind));
        }
    }
    try
    {
        a.validate();
    }
    catch (const InvalidArgument& e)
    {
        diag.add(path, e.what());
    }
    return a;
}

DetectorConfig read_detector(const json& j, const std::string& path, Diagnostics& diag)
{
    DetectorConfig d;
    if (j.is_string())
    {
        try
        {
            d.spec.family = parse_detector_family(j.get<std::string>());
        }
        catch (const InvalidArgument& e)
        {
            diag.add(path, e.what());
        }
        return d;
    }
    ObjectReader r(j, path, diag);
    std::string family = "rdd";
    r.string("family", family);
    try
    {
        d.spec.family = parse_detector_family(family);
    }
    catch (const InvalidArgument& e)
    {
        r.error("family", e.what());
    }
    if (const json* k = r.find("K"))
    {
        if (k->is_number_integer() && k->get<long long>() >= 0)
        {
            d.spec.K = k->get<Index>();
            d.explicit_k = true;
        }
        else
        {
            r.error("K", "expected a nonnegative integer");
        }
    }
    for (const char* key : {"xi", "eps"})
    {
        const json* v = r.find(key);
        if (!v)
            continue;
        if (v->is_string() && v->get<std::string>() == "tune")
        {
            d.tune = true;
        }
        else if (v->is_number() && v->get<double>() >= 0.0)
        {
            (std::string(key) == "xi" ? d.spec.xi : d.spec.eps) = v->get<double>();
        }
        else
        {
            r.error(key, "expected a nonnegative number or \"tune\"");
        }
    }
    r.boolean("whiten", d.spec.whiten);
    std::string stage = "sign";
    r.string("symbols", stage);
    try
    {
        d.spec.symbol_stage = parse_symbol_stage(stage);
    }
    catch (const InvalidArgument& e)
    {
        r.error("symbols", e.what());
    }
    r.integer("ml_max_users", d.spec.ml_max_users, 1, 20);
    if (d.tune && d.spec.family != DetectorFamily::rddt && d.spec.family != DetectorFamily::rddft)
        r.error_here("\"tune\" applies only to rddt (xi) and rddft (eps)");
    return d;
}

SweepConfig read_sweep(const json& j, const std::string& path, Diagnostics& diag)
{
    SweepConfig s;
    ObjectReader r(j, path, diag);
    std::string var;
    r.string("variable", var);
    if (var == "M")
        s.variable = SweepVariable::M;
    else if (var == "K")
        s.variable = SweepVariable::K;
    else if (var == "N")
        s.variable = SweepVariable::N;
    else if (var == "sigma2")
        s.variable = SweepVariable::sigma2;
    else if (var == "detector")
        s.variable = SweepVariable::detector;
    else
        r.error("variable", fmt::format("unknown sweep variable \"{}\" (expected M, K, N, sigma2 or detector)", var));

    const json* values = r.find("values");
    if (!values || !values->is_array() || values->empty())
    {
        r.error("values", "expected a nonempty array");
        return s;
    }
    for (std::size_t i = 0; i < values->size(); ++i)
    {
        const json& v = (*values)[i];
        const std::string p = fmt::format("{}[{}]", r.child("values"), i);
        if (s.variable == SweepVariable::detector)
        {
            if (!v.is_string())
            {
                diag.add(p, "expected a detector name");
                continue;
            }
            try
            {
                parse_detector_family(v.get<std::string>());
                s.detectors.push_back(v.get<std::string>());
            }
            catch (const InvalidArgument& e)
            {
                diag.add(p, e.what());
            }
        }
        else if (s.variable == SweepVariable::sigma2)
        {
            if (!v.is_number() || v.get<double>() < 0.0)
                diag.add(p, "expected a nonnegative number");
            else
                s.values.push_back(v.get<double>());
        }
        else
        {
            if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > max_users)
                diag.add(p, "expected a positive integer");
            else
                s.values.push_back(static_cast<double>(v.get<long long>()));
        }
    }
    return s;
}

TuneConfig read_tune(const json& j, const std::string& path, Diagnostics& diag)
{
    TuneConfig t;
    ObjectReader r(j, path, diag);
    r.numbers("xi_grid", t.xi_grid);
    r.numbers("eps_grid", t.eps_grid);
    r.integer("trials", t.trials, 1, 1000000000LL);
    return t;
}

RunConfig read_run(const json& j, const std::string& path, Diagnostics& diag)
{
    RunConfig run;
    ObjectReader r(j, path, diag);
    for (const char* key : {"name", "notes", "seed", "threads", "output"})
        r.ignore(key);
    r.string("label", run.label);
    r.integer("N", run.N, 1, max_users);
    r.integer("K", run.K, 1, max_users);
    r.integer("M", run.M, 1, max_users);
    r.number("sigma2", run.sigma2, 0.0, 1e300);
    r.number("alpha", run.alpha, 0.0, 1e300, true);
    r.integer("trials", run.trials, 1, 1000000000000LL);
    if (const json* m = r.find("matrix"))
        run.matrix = read_matrix(*m, r.child("matrix"), diag);
    if (const json* g = r.find("gram"))
        run.gram = read_gram(*g, r.child("gram"), diag);
    if (const json* a = r.find("amplitudes"))
        run.amplitudes = read_amplitudes(*a, r.child("amplitudes"), diag);
    if (const json* s = r.find("sweep"))
        run.sweep = read_sweep(*s, r.child("sweep"), diag);
    if (const json* t = r.find("tune"))
        run.tune = read_tune(*t, r.child("tune"), diag);
    const json* dets = r.find("detectors");
    if (dets)
    {
        if (!dets->is_array())
        {
            r.error("detectors", "expected an array");
        }
        else
        {
            for (std::size_t i = 0; i < dets->size(); ++i)
                run.detectors.push_back(
                    read_detector((*dets)[i], fmt::format("{}[{}]", r.child("detectors"), i), diag));
        }
    }
    if (run.detectors.empty() && run.sweep.variable != SweepVariable::detector)
        r.error("detectors", "at least one detector is required");
    if (!run.M && run.matrix.rows)
        run.M = run.matrix.rows;
    if (!run.M && run.sweep.variable != SweepVariable::M && run.matrix.kind != MatrixKind::file)
        r.error("M", "required unless M is swept or the matrix comes from a file");
    if (run.K > run.N)
        r.error("K", fmt::format("K = {} exceeds N = {}", run.K, run.N));
    for (const auto& d : run.detectors)
    {
        if (!d.tune)
            continue;
        const bool xi = d.spec.family == DetectorFamily::rddt;
        if ((xi ? run.tune.xi_grid : run.tune.eps_grid).empty())
            r.error("tune", fmt::format("{} is needed when a detector asks for tuning", xi ? "xi_grid" : "eps_grid"));
    }
    return run;
}

} // namespace

std::string to_string(SweepVariable v)
{
    switch (v)
    {
    case SweepVariable::none: return "none";
    case SweepVariable::M: return "M";
    case SweepVariable::K: return "K";
    case SweepVariable::N: return "N";
    case SweepVariable::sigma2: return "sigma2";
    case SweepVariable::detector: return "detector";
    }
    return "?";
}

ExperimentConfig parse_config(const json& doc)
{
    Diagnostics diag;
    ExperimentConfig cfg;
    json base = doc;
    json runs = json::array();
    {
        ObjectReader r(doc, "$", diag);
        if (!diag.empty())
            diag.raise();
        r.string("name", cfg.name);
        r.string("notes", cfg.notes);
        r.seed("seed", cfg.seed);
        r.integer("threads", cfg.threads, 0, 4096);
        r.string("output", cfg.output);
        if (const json* rs = r.find("runs"))
        {
            if (!rs->is_array() || rs->empty())
                r.error("runs", "expected a nonempty array");
            else
                runs = *rs;
            base.erase("runs");
        }
        // The remaining keys are run settings, validated per run below.
        for (const auto& [key, value] : doc.items())
            r.ignore(key);
    }
    if (runs.empty())
        runs.push_back(json::object());
    for (std::size_t i = 0; i < runs.size(); ++i)
    {
        const std::string path = doc.contains("runs") ? fmt::format("$.runs[{}]", i) : "$";
        if (!runs[i].is_object())
        {
            diag.add(path, "expected an object");
            continue;
        }
        json merged = base;
        merged.merge_patch(runs[i]);
        Diagnostics local;
        cfg.runs.push_back(read_run(merged, path, local));
        // Problems with settings inherited from the base document are reported at their base path, once.
        for (const std::string& line : local.lines())
        {
            const std::string rest = line.substr(path.size());
            const auto end = rest.find_first_of(".[:", 1);
            const std::string key = rest.size() > 1 && rest[0] == '.' ? rest.substr(1, end - 1) : "";
            if (path != "$" && !key.empty() && !runs[i].contains(key))
                diag.add_line("$" + rest);
            else
                diag.add_line(line);
        }
    }
    if (!diag.empty())
        diag.raise();
    return cfg;
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& source)
{
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        throw ConfigError(fmt::format("{}: not valid JSON: {}", source, e.what()));
    }
    return parse_config(doc);
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(fmt::format("cannot open config file {}", path));
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str(), path);
}

void apply_seed_override(ExperimentConfig& cfg)
{
    const char* env = std::getenv("RDMUD_SEED");
    if (env == nullptr || *env == '\0')
        return;
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || *end != '\0' || env[0] == '-')
        throw ConfigError(fmt::format("RDMUD_SEED must be an unsigned integer, got \"{}\"", env));
    cfg.seed = v;
}

} // namespace rdmud
