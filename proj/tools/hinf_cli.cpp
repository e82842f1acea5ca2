// hinf: command-line front end over the C API. Each subcommand exposes one
// option per config field (taken from the command's default config); values
// are forwarded as a JSON config to hinf_run.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "hinf/hinf.h"
#include "json.hpp"

using Json = nlohmann::ordered_json;

namespace {

struct Owned {
    char* s = nullptr;
    ~Owned() { hinf_string_free(s); }
};

struct Subcommand {
    CLI::App* app = nullptr;
    Json defaults;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
    std::string config_file, output, csv;
    bool compact = false;
};

std::string dashed(std::string key)
{
    for (auto& c : key)
        if (c == '_')
            c = '-';
    return key;
}

const std::map<std::string, std::string> kSummaries{
    {"ball", "Enumerate a ball in the Cayley graph"},
    {"rips", "Build the Rips complex on a ball and count simplices"},
    {"homology", "Betti numbers of a Rips window or a radial subcomplex"},
    {"ends", "Component counts of complements of balls"},
    {"tower", "Ranks of the complement homology tower"},
    {"fill-at-infinity", "Fill a locally finite cycle near infinity and scan for stabilization"},
    {"nerve", "Cover nerve of a metric sample at one scale"},
    {"cech-tower", "Induced ranks along a ladder of nerve scales"},
    {"divergence-check", "Compare ray divergence with the visual metric"},
    {"subdivision-check", "Certify a disk subdivision and fill its loop"},
};

int die(int code, const std::string& msg)
{
    std::cerr << "hinf: " << msg << '\n';
    return code;
}

Json convert(const std::string& key, const std::string& text, const Json& dflt)
{
    try {
        if (dflt.is_number_integer())
            return Json(std::stoll(text));
        if (dflt.is_number())
            return Json(std::stod(text));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--" + dashed(key), "'" + text + "' is not a number");
    }
    // Strings stay strings; list fields accept comma-separated strings.
    return Json(text);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Finite-window homology at infinity for finitely generated groups"};
    app.set_version_flag("--version", std::string(hinf_version()));
    app.require_subcommand(1);

    std::map<std::string, Subcommand> subs;
    std::istringstream names(hinf_commands());
    for (std::string name; names >> name;) {
        Subcommand& s = subs[name];
        Owned d;
        if (hinf_default_config(name.c_str(), &d.s) != HINF_OK)
            return die(HINF_INTERNAL, hinf_last_error());
        s.defaults = Json::parse(d.s);
        const auto summary = kSummaries.find(name);
        s.app = app.add_subcommand(name, summary == kSummaries.end() ? "" : summary->second);
        for (const auto& [key, value] : s.defaults.items()) {
            const std::string opt = key == dashed(key) ? "--" + key : "--" + key + ",--" + dashed(key);
            if (value.is_boolean()) {
                // Booleans get --key and --no-key.
                s.app->add_flag(opt + ",!--no-" + dashed(key), s.flags[key], "default " + value.dump());
            } else {
                s.app->add_option(opt, s.values[key], "default " + value.dump());
            }
        }
        s.app->add_option("--config", s.config_file, "JSON file with config fields (command-line values win)");
        s.app->add_option("-o,--output", s.output, "write the JSON report here instead of stdout");
        s.app->add_flag("--compact", s.compact, "single-line JSON");
        if (name == "tower")
            s.app->add_option("--csv", s.csv, "also write the rank matrix as CSV");
    }

    CLI11_PARSE(app, argc, argv);

    for (auto& [name, s] : subs) {
        if (!s.app->parsed())
            continue;
        Json cfg = Json::object();
        if (!s.config_file.empty()) {
            std::ifstream in(s.config_file);
            if (!in)
                return die(HINF_IO, "cannot read " + s.config_file);
            try {
                cfg = Json::parse(in);
            } catch (const std::exception& e) {
                return die(HINF_PARSE, s.config_file + ": " + e.what());
            }
        }
        try {
            for (const auto& [key, text] : s.values)
                if (s.app->count("--" + key) > 0)
                    cfg[key] = convert(key, text, s.defaults[key]);
        } catch (const CLI::ValidationError& e) {
            return die(HINF_INVALID_ARGUMENT, e.what());
        }
        for (const auto& [key, on] : s.flags)
            if (s.app->count("--" + key) + s.app->count("--no-" + dashed(key)) > 0)
                cfg[key] = on;

        Owned report;
        const hinf_status st = hinf_run(name.c_str(), cfg.dump().c_str(), &report.s);
        if (st != HINF_OK)
            return die(st, hinf_last_error());
        std::string text = report.s;
        if (s.compact)
            text = Json::parse(text).dump();
        if (s.output.empty()) {
            std::cout << text << '\n';
        } else {
            std::ofstream out(s.output);
            out << text << '\n';
            if (!out)
                return die(HINF_IO, "cannot write " + s.output);
        }
        if (!s.csv.empty()) {
            Owned csv;
            if (hinf_tower_csv(report.s, &csv.s) != HINF_OK)
                return die(HINF_INTERNAL, hinf_last_error());
            std::ofstream out(s.csv);
            out << csv.s;
            if (!out)
                return die(HINF_IO, "cannot write " + s.csv);
        }
    }
    return 0;
}
