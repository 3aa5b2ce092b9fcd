// Command-line front end for the canht shared library: parses a curve, a
// point and a precision, runs the height computation through the C API and
// prints text or JSON.  Also hosts a small benchmark driver.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "canht.h"
#include "json.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitNotOnCurve = 3;
constexpr int kExitSingular = 4;

struct OwnedString {
    char* s = nullptr;
    ~OwnedString() { canht_string_free(s); }
    std::string str() const { return s ? std::string(s) : std::string(); }
};

int status_to_exit(canht_status st) {
    switch (st) {
        case CANHT_OK: return 0;
        case CANHT_ERR_PARSE: return kExitParse;
        case CANHT_ERR_NOT_ON_CURVE: return kExitNotOnCurve;
        case CANHT_ERR_SINGULAR: return kExitSingular;
        default: return 1;
    }
}

bool split_csv(const std::string& in, std::vector<std::string>& out, std::size_t expect) {
    out.clear();
    std::stringstream ss(in);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out.size() == expect;
}

unsigned long digits_to_bits(unsigned long digits) {
    return static_cast<unsigned long>(digits * 3.3219280948873623) + 4;
}

struct ComputeArgs {
    std::string curve;
    std::string point;
    unsigned long digits = 30;
    unsigned long bits = 0;  // 0: derive from digits
    bool breakdown = false;
    bool json = false;
    std::string arch_method = "agm";
    std::string trial_division = "1";
    bool variant_2b4 = false;
    bool incremental_basis = false;
};

int run_compute(const ComputeArgs& args) {
    std::vector<std::string> coeffs;
    if (!split_csv(args.curve, coeffs, 5)) {
        std::cerr << "error: --curve expects a1,a2,a3,a4,a6\n";
        return kExitParse;
    }

    bool infinity = args.point == "O" || args.point == "o";
    std::vector<std::string> xy;
    if (!infinity && !split_csv(args.point, xy, 2)) {
        std::cerr << "error: --point expects x,y or O\n";
        return kExitParse;
    }

    if (args.arch_method != "agm" && args.arch_method != "series") {
        std::cerr << "error: --arch-method must be agm or series\n";
        return kExitParse;
    }

    unsigned long bits = args.bits ? args.bits : digits_to_bits(args.digits);
    int print_digits = static_cast<int>(args.bits ? static_cast<unsigned long>(args.bits / 3.33) + 1
                                                  : args.digits);

    canht_curve* curve = nullptr;
    canht_status st = canht_curve_new(coeffs[0].c_str(), coeffs[1].c_str(), coeffs[2].c_str(),
                                      coeffs[3].c_str(), coeffs[4].c_str(), &curve);
    if (st != CANHT_OK) {
        std::cerr << "error: " << canht_status_message(st) << "\n";
        return status_to_exit(st);
    }

    canht_options opts;
    canht_options_init(&opts);
    opts.arch_series = args.arch_method == "series" ? 1 : 0;
    opts.trial_division = args.trial_division.c_str();
    opts.variant_2b4 = args.variant_2b4 ? 1 : 0;
    opts.incremental_basis = args.incremental_basis ? 1 : 0;

    canht_result* result = nullptr;
    st = canht_compute(curve, infinity ? nullptr : xy[0].c_str(), infinity ? nullptr : xy[1].c_str(),
                       bits, &opts, &result);
    if (st != CANHT_OK) {
        std::cerr << "error: " << canht_status_message(st) << "\n";
        canht_curve_free(curve);
        return status_to_exit(st);
    }

    unsigned torsion = 0;
    canht_result_torsion_order(result, &torsion);
    OwnedString h_can, h_nai, psi_f;
    canht_result_h_canonical(result, print_digits, &h_can.s);
    canht_result_h_naive(result, print_digits, &h_nai.s);
    canht_result_psi_finite_value(result, print_digits, &psi_f.s);
    OwnedString psi_inf;
    canht_status psi_inf_st = canht_result_psi_infinity(result, print_digits, &psi_inf.s);

    size_t term_count = 0;
    canht_result_term_count(result, &term_count);
    std::vector<std::pair<std::string, std::string>> terms;
    for (size_t i = 0; i < term_count; ++i) {
        OwnedString q, mu;
        canht_result_term(result, i, &q.s, &mu.s);
        terms.emplace_back(q.str(), mu.str());
    }

    if (args.json) {
        nlohmann::json j;
        j["curve"] = coeffs;
        if (infinity) {
            j["point"] = "O";
        } else {
            j["point"] = {{"x", xy[0]}, {"y", xy[1]}};
        }
        j["precision_bits"] = bits;
        j["h_naive"] = h_nai.str();
        nlohmann::json jterms = nlohmann::json::array();
        for (const auto& [q, mu] : terms) jterms.push_back({{"q", q}, {"mu", mu}});
        j["psi_finite"] = {{"terms", jterms}, {"value", psi_f.str()}};
        if (psi_inf_st == CANHT_OK) {
            j["psi_infinity"] = psi_inf.str();
        } else {
            j["psi_infinity"] = nullptr;
        }
        j["h_canonical"] = h_can.str();
        j["normalization"] = "CPS (twice Silverman-book)";
        if (torsion) {
            j["torsion_order"] = torsion;
        } else {
            j["torsion_order"] = nullptr;
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << h_can.str();
        if (torsion) std::cout << " (torsion, order " << torsion << ")";
        std::cout << "\n";
        if (args.breakdown) {
            std::cout << "h_naive: " << h_nai.str() << "\n";
            if (psi_inf_st == CANHT_OK) {
                std::cout << "psi_infinity: " << psi_inf.str() << "\n";
            } else {
                std::cout << "psi_infinity: undefined (2-torsion)\n";
            }
            if (terms.empty()) {
                std::cout << "psi_finite: 0 (empty)\n";
            } else {
                std::cout << "psi_finite: ";
                for (size_t i = 0; i < terms.size(); ++i) {
                    if (i) std::cout << " + ";
                    std::cout << terms[i].second << "*log(" << terms[i].first << ")";
                }
                std::cout << " = " << psi_f.str() << "\n";
            }
        }
    }

    canht_result_free(result);
    canht_curve_free(curve);
    return 0;
}

struct BenchArgs {
    unsigned long size = 100;  // decimal digits of the family parameter
    unsigned long reps = 3;
    unsigned long digits = 30;
    unsigned long seed = 0;
};

int run_bench(const BenchArgs& args) {
    if (args.reps == 0) return 0;
    if (args.size == 0) {
        std::cerr << "error: --size must be positive\n";
        return kExitParse;
    }
    std::mt19937_64 rng(args.seed ? args.seed : std::random_device{}());
    std::uniform_int_distribution<int> digit(0, 9), lead(1, 9);

    std::vector<double> times;
    for (unsigned long rep = 0; rep < args.reps; ++rep) {
        std::string a;
        a.push_back(static_cast<char>('0' + lead(rng)));
        for (unsigned long i = 1; i < args.size; ++i) a.push_back(static_cast<char>('0' + digit(rng)));
        std::string minus_a = "-" + a;

        canht_curve* curve = nullptr;
        canht_status st = canht_curve_new("0", "0", "0", minus_a.c_str(), a.c_str(), &curve);
        if (st != CANHT_OK) {
            std::cerr << "error: " << canht_status_message(st) << "\n";
            return status_to_exit(st);
        }
        auto t0 = std::chrono::steady_clock::now();
        canht_result* result = nullptr;
        st = canht_compute(curve, "1", "1", digits_to_bits(args.digits), nullptr, &result);
        auto t1 = std::chrono::steady_clock::now();
        if (st != CANHT_OK) {
            std::cerr << "error: " << canht_status_message(st) << "\n";
            canht_curve_free(curve);
            return status_to_exit(st);
        }
        double dt = std::chrono::duration<double>(t1 - t0).count();
        times.push_back(dt);
        OwnedString h;
        canht_result_h_canonical(result, 6, &h.s);
        std::printf("rep %lu: %.6f s  (height %s)\n", rep, dt, h.str().c_str());
        canht_result_free(result);
        canht_curve_free(curve);
    }
    std::sort(times.begin(), times.end());
    double median = times[times.size() / 2];
    if (times.size() % 2 == 0) median = (median + times[times.size() / 2 - 1]) / 2;
    std::printf("family y^2 = x^3 - a*x + a, point (1,1), a with %lu digits, %lu run(s)\n",
                args.size, args.reps);
    std::printf("median: %.6f s\n", median);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"canonical heights of rational points on elliptic curves over Q"};
    app.require_subcommand(1);

    ComputeArgs cargs;
    CLI::App* compute = app.add_subcommand("compute", "compute the canonical height of a point");
    compute->add_option("--curve", cargs.curve, "coefficients a1,a2,a3,a4,a6")->required();
    compute->add_option("--point", cargs.point, "point x,y (decimals or num/den) or O")->required();
    compute->add_option("--digits", cargs.digits, "decimal digits of precision (default 30)");
    compute->add_option("--bits", cargs.bits, "bits of precision (overrides --digits)");
    compute->add_flag("--breakdown", cargs.breakdown, "print the local decomposition");
    compute->add_flag("--json", cargs.json, "machine-readable output");
    compute->add_option("--arch-method", cargs.arch_method, "agm or series (default agm)");
    compute->add_option("--trial-division", cargs.trial_division,
                        "trial-factor the discriminant up to this bound");
    compute->add_flag("--variant-2b4", cargs.variant_2b4, "shorter finite-part truncation");
    compute->add_flag("--incremental-basis", cargs.incremental_basis,
                      "refine the coprime basis incrementally");

    BenchArgs bargs;
    CLI::App* bench = app.add_subcommand("bench", "time the height computation on a test family");
    bench->add_option("--size", bargs.size, "decimal digits of the family parameter (default 100)");
    bench->add_option("--reps", bargs.reps, "number of repetitions (default 3)");
    bench->add_option("--digits", bargs.digits, "decimal digits of precision (default 30)");
    bench->add_option("--seed", bargs.seed, "seed for the parameter generator");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitParse;
    }

    if (compute->parsed()) return run_compute(cargs);
    if (bench->parsed()) return run_bench(bargs);
    return kExitParse;
}
