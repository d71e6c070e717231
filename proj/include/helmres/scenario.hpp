#pragma once
#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "helmres/aperture_potential.hpp"
#include "helmres/timereversal_imaging.hpp"

namespace helmres {

// Flat "key = value" text, '#' starts a comment. Unknown keys are an error.
class KeyValueConfig {
public:
    static KeyValueConfig parse(const std::string& text, const std::string& origin = "<string>");
    static KeyValueConfig load(const std::string& path);

    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    std::string str(const std::string& key) const;
    std::string str(const std::string& key, const std::string& def) const;
    double num(const std::string& key, double def) const;
    long long integer(const std::string& key, long long def) const;
    bool flag(const std::string& key, bool def) const;
    std::vector<double> list(const std::string& key, std::vector<double> def) const;
    // "x,y; x,y; ..." (or 3 components with dim = 3)
    std::vector<std::vector<double>> points(const std::string& key, int dim) const;
    void require(const std::string& key) const;
    std::vector<std::string> keys() const;
    const std::string& origin() const { return origin_; }

private:
    std::map<std::string, std::string> kv_;
    std::map<std::string, int> line_;
    std::string origin_;
    std::string where(const std::string& key) const;
};

enum class RunKind { capacity, resonances, psf, imaging, validate_integrals, validate, sweep };
RunKind parse_run_kind(const std::string& s);
std::string to_string(RunKind k);

struct Scenario {
    std::string name = "default";
    RunKind run = RunKind::capacity;

    SystemConfig system;
    bool capacity_from_mesh = false;  // system.capacity = auto

    ShapeSpec shape = ShapeSpec::disk();
    int resolution = 16;

    std::vector<double> epsilons{1e-2, 2.5e-3};
    Vec3 scan_origin{0, 0, 0.5}, scan_direction{1, 0, 0};
    double scan_half_width = 3.0;
    int scan_points = 301;
    Vec3 source{0, 0, 0.5};

    double t = 0.0;
    SignalKind signal = SignalKind::smooth_bump;
    double C1 = 2.0;
    int signal_grid = 4096;
    ZetaMode zeta_mode = ZetaMode::frozen_at_0;
    bool robustness = false;

    int integral_samples = 1000;

    std::string out_dir = "helmres_out";
    std::uint64_t seed = 20240601;
    int threads = 1;
};

// Reads every known key, rejects unknown ones and checks the subset the run kind needs.
Scenario scenario_from_config(const KeyValueConfig& cfg, RunKind run);
Scenario default_scenario(RunKind run);

// Writes the artifact files plus manifest.json into s.out_dir (created if missing).
// Returns the process exit status: 0 ok, 1 when a check inside the run failed.
int run_scenario(const Scenario& s, std::ostream& log);

// --- acceptance suite --------------------------------------------------------

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string measured;
    std::string threshold;
    double seconds = 0;
};

struct ValidationOptions {
    std::string out_dir = "helmres_validate";
    int resolution = 16;
    int threads = 1;
    std::uint64_t seed = 20240601;
    int integral_samples = 1000;
    bool determinism_rerun = true;  // criterion 11 repeats the suite in <out>/rerun
};

// Runs criteria 1-10 (and 11 when enabled), printing one line per criterion to log.
std::vector<CriterionResult> run_validation(const ValidationOptions& opt, std::ostream& log);

// --- shared plumbing ---------------------------------------------------------

std::string fmt17(double v);
std::uint64_t fnv1a64(const std::string& bytes);
std::string read_file(const std::string& path);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    CsvWriter& row(const std::vector<double>& v);
    CsvWriter& row(const std::vector<std::string>& v);
    void save(const std::string& path) const;

private:
    std::string body_;
    std::size_t cols_;
};

struct IntegralCheck {
    double max_complex_err = 0, max_abs_im_err = 0, max_weighted_err = 0, max_ratio_err = 0;
    int approx_eligible = 0;
    double max_approx_rel = 0;           // weighted form vs exact, eligible specs only
    double max_ratio_form_rel = 0;       // leading-order abs-ratio form vs exact, eligible specs
    double max_log_form_rel = 0;         // log-only form vs exact weighted form, eligible specs
};

// Random Lorentzian specs checked against adaptive quadrature; rows go to csv when given.
IntegralCheck check_integrals(int samples, std::uint64_t seed, CsvWriter* csv = nullptr);

}  // namespace helmres
