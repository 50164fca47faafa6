#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "termrec/events.hpp"

namespace termrec {

// Deterministic generator of desk-scale event streams with a planted
// code -> preferred-term structure, emitted in the ingestion CSV formats.
struct GeneratorConfig {
    std::uint64_t seed = 1;
    int n_patients = 200;
    int n_codes = 30;
    int n_terms = 60;
    double encounters_per_patient = 8.0;  // Poisson mean, clamped to the preprocessing minimum
    double searches_per_encounter = 1.0;  // Poisson mean per encounter
    int codes_per_encounter = 1;          // distinct codes drawn per encounter
    std::vector<TermId> planted_map;      // code -> preferred term; default i % n_terms
    double p_signal = 0.9;                // probability a search uses the planted term
    Timestamp start = Timestamp{1356998400}; // 2013-01-01T00:00:00Z
    int encounter_gap_mean_days = 20;
    double session_gap_rate = 0.25;       // chance an encounter gap exceeds the session window
    bool sparse_mode = false;             // skip the per-patient clamps (filter testing)

    void validate() const;
};

struct GeneratedFiles {
    std::string encounter_path;
    std::string search_path;
};

// Writes encounters.csv and searches.csv under out_dir, headed by the config
// echoed as '#' comment lines. Byte-identical for identical configs.
GeneratedFiles generate(const GeneratorConfig& config, const std::string& out_dir);

// key=value form used both for the file echo and for config files.
std::string generator_config_kv(const GeneratorConfig& config);
GeneratorConfig load_generator_config(const std::string& path);

} // namespace termrec
