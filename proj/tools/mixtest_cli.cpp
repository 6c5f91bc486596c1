#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mixtest/calibration.hpp"
#include "mixtest/errors.hpp"
#include "mixtest/io.hpp"
#include "mixtest/simulation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitReject = 3;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("MIXTEST_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw mixtest::InvalidParam("MIXTEST_SEED is not an integer");
        }
    }
    return 0;
}

const mixtest::MixtureSpec& lookup_model(const std::string& name) {
    const auto& models = mixtest::builtin_models();
    const auto it = models.find(name);
    if (it == models.end()) {
        std::string known;
        for (const auto& [key, spec] : models) {
            if (!known.empty()) known += ", ";
            known += key;
        }
        throw mixtest::InvalidParam("unknown model '" + name + "' (known: " + known + ")");
    }
    return it->second;
}

struct CommonArgs {
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--seed", args.seed, "RNG seed (fallback: MIXTEST_SEED, then 0)");
    cmd->add_option("--threads", args.threads, "worker threads (0 = all cores)");
}

int run_simulate(const std::string& model_name, int n, const CommonArgs& common,
                 const std::string& out_path) {
    const auto& model = lookup_model(model_name);
    const auto sample = mixtest::sample_mixture(model, n, resolve_seed(common.seed));
    mixtest::write_sample_csv(out_path, sample);
    const std::string hist_path = out_path + ".hist.csv";
    mixtest::write_histogram_csv(hist_path, sample);
    std::cout << "wrote " << out_path << " and " << hist_path << "\n";
    return kExitOk;
}

int run_test_cmd(const std::string& in_path, double s, const std::string& method,
                 double gamma1, double alpha, const std::string& model_name,
                 int reps, int resamples, double radius, const CommonArgs& common) {
    const auto sample = mixtest::parse_sample_csv(in_path);

    mixtest::ThresholdSpec spec;
    spec.gamma = gamma1;
    spec.alpha = alpha;
    spec.reps = reps;
    spec.resamples = resamples;
    spec.seed = resolve_seed(common.seed);
    if (method == "theoretical") {
        spec.method = mixtest::ThresholdSpec::Method::Theoretical;
    } else if (method == "mc-quantile") {
        spec.method = mixtest::ThresholdSpec::Method::MCQuantile;
        if (model_name.empty()) {
            throw mixtest::InvalidParam("--method mc-quantile requires --model");
        }
        spec.calibration_model = lookup_model(model_name);
    } else if (method == "bootstrap") {
        spec.method = mixtest::ThresholdSpec::Method::Bootstrap;
    } else {
        throw mixtest::InvalidParam("unknown method '" + method + "'");
    }

    const auto outcome = mixtest::run_test(sample, s, spec, mixtest::ScalingBasis::haar(),
                                           radius, common.threads);
    std::cout << mixtest::outcome_to_json(outcome).dump(2) << "\n";
    return outcome.reject ? kExitReject : kExitOk;
}

int run_calibrate(const std::string& model_name, int n, double s, double gamma1,
                  int reps, const CommonArgs& common) {
    const auto& model = lookup_model(model_name);
    const double t_n = mixtest::mc_quantile_threshold(
        model, n, s, gamma1, reps, resolve_seed(common.seed), common.threads);
    std::cout << t_n << "\n";
    return kExitOk;
}

int run_power(const std::string& model_name, const std::vector<int>& n_list,
              double s, double gamma1, int reps, const CommonArgs& common,
              const std::string& out_path) {
    const auto& h0 = lookup_model(model_name + "_h0");
    const auto& h1 = lookup_model(model_name + "_h1");
    const auto reports = mixtest::run_power_study(h0, h1, n_list, s, gamma1, reps,
                                                  resolve_seed(common.seed),
                                                  common.threads);
    mixtest::write_reports_csv(out_path, reports);
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimax two-sample test on mixture components with known weights"};
    app.require_subcommand(1);

    CommonArgs sim_common, test_common, cal_common, pow_common;

    auto* simulate = app.add_subcommand("simulate", "draw a sample from a named model");
    std::string sim_model, sim_out;
    int sim_n = 0;
    simulate->add_option("--model", sim_model, "model name")->required();
    simulate->add_option("--n", sim_n, "observations per group")->required();
    simulate->add_option("--out", sim_out, "output CSV path")->required();
    add_common(simulate, sim_common);

    auto* test = app.add_subcommand("test", "run the test on a sample file");
    std::string test_in, test_method = "mc-quantile", test_model;
    double test_s = 1.0, test_gamma1 = 0.1, test_alpha = 0.1, test_radius = 2.0;
    int test_reps = 1000, test_resamples = 200;
    test->add_option("--in", test_in, "input sample CSV")->required();
    test->add_option("--s", test_s, "Besov smoothness")->required();
    test->add_option("--method", test_method, "theoretical|mc-quantile|bootstrap");
    test->add_option("--gamma1", test_gamma1, "target type-I rate / gamma");
    test->add_option("--alpha", test_alpha, "bootstrap level");
    test->add_option("--model", test_model, "calibration model for mc-quantile");
    test->add_option("--reps", test_reps, "calibration replications");
    test->add_option("--resamples", test_resamples, "bootstrap resamples");
    test->add_option("--radius", test_radius, "density-class radius R");
    add_common(test, test_common);

    auto* calibrate = app.add_subcommand("calibrate", "print the MC-quantile threshold");
    std::string cal_model;
    double cal_s = 1.0, cal_gamma1 = 0.1;
    int cal_n = 0, cal_reps = 1000;
    calibrate->add_option("--model", cal_model, "null model name")->required();
    calibrate->add_option("--n", cal_n, "observations per group")->required();
    calibrate->add_option("--s", cal_s, "Besov smoothness")->required();
    calibrate->add_option("--gamma1", cal_gamma1, "target type-I rate");
    calibrate->add_option("--reps", cal_reps, "replications");
    add_common(calibrate, cal_common);

    auto* power = app.add_subcommand("power", "power study over a grid of n");
    std::string pow_model, pow_out;
    std::vector<int> pow_n;
    double pow_s = 4.0, pow_gamma1 = 0.1;
    int pow_reps = 1000;
    power->add_option("--model", pow_model, "model family (e.g. model1)")->required();
    power->add_option("--n", pow_n, "comma-separated n values")
        ->required()
        ->delimiter(',');
    power->add_option("--s", pow_s, "Besov smoothness");
    power->add_option("--gamma1", pow_gamma1, "target type-I rate");
    power->add_option("--reps", pow_reps, "replications per phase");
    power->add_option("--out", pow_out, "output CSV path")->required();
    add_common(power, pow_common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitUsage : kExitOk;
    }

    try {
        if (simulate->parsed()) return run_simulate(sim_model, sim_n, sim_common, sim_out);
        if (test->parsed()) {
            return run_test_cmd(test_in, test_s, test_method, test_gamma1, test_alpha,
                                test_model, test_reps, test_resamples, test_radius,
                                test_common);
        }
        if (calibrate->parsed()) {
            return run_calibrate(cal_model, cal_n, cal_s, cal_gamma1, cal_reps,
                                 cal_common);
        }
        if (power->parsed()) {
            return run_power(pow_model, pow_n, pow_s, pow_gamma1, pow_reps, pow_common,
                             pow_out);
        }
    } catch (const mixtest::InvalidParam& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const mixtest::DimensionMismatch& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
