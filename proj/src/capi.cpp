#include "canht.h"

#include <cstring>
#include <new>
#include <string>

#include "canht/arith.hpp"
#include "canht/errors.hpp"
#include "canht/height.hpp"

using namespace canht;

struct canht_curve {
    WeierstrassModel model;
};

struct canht_result {
    HeightBreakdown breakdown;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = new (std::nothrow) char[s.size() + 1];
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

bool parse_integer(const char* s, mpz_class& out) {
    if (!s || !*s) return false;
    return out.set_str(s, 10) == 0;
}

bool parse_rational(const char* s, mpq_class& out) {
    if (!s || !*s) return false;
    std::string str(s);
    if (str.find_first_of(" \t") != std::string::npos) return false;
    if (out.set_str(str, 10) != 0) return false;
    if (out.get_den() == 0) return false;
    out.canonicalize();
    return true;
}

template <typename F>
canht_status guarded(F&& f) {
    try {
        return f();
    } catch (const SingularCurveError&) {
        return CANHT_ERR_SINGULAR;
    } catch (const NotOnCurveError&) {
        return CANHT_ERR_NOT_ON_CURVE;
    } catch (const std::domain_error&) {
        return CANHT_ERR_RANGE;
    } catch (const std::bad_alloc&) {
        return CANHT_ERR_INTERNAL;
    } catch (const Error&) {
        return CANHT_ERR_INTERNAL;
    } catch (...) {
        return CANHT_ERR_INTERNAL;
    }
}

canht_status render(const Real& v, int digits, char** out) {
    std::string s = v.decimal(digits);
    *out = dup_string(s);
    return *out ? CANHT_OK : CANHT_ERR_INTERNAL;
}

}  // namespace

extern "C" {

const char* canht_version(void) { return "0.1.0"; }

const char* canht_status_message(canht_status s) {
    switch (s) {
        case CANHT_OK: return "ok";
        case CANHT_ERR_PARSE: return "malformed number or point";
        case CANHT_ERR_NOT_ON_CURVE: return "point does not satisfy the curve equation";
        case CANHT_ERR_SINGULAR: return "singular curve (discriminant is zero)";
        case CANHT_ERR_RANGE: return "argument outside the valid range";
        case CANHT_ERR_INTERNAL: return "internal error";
        case CANHT_ERR_NULL: return "required argument was NULL";
    }
    return "unknown status";
}

void canht_string_free(char* s) { delete[] s; }

void canht_options_init(canht_options* opts) {
    if (!opts) return;
    opts->arch_series = 0;
    opts->trial_division = nullptr;
    opts->variant_2b4 = 0;
    opts->incremental_basis = 0;
}

canht_status canht_curve_new(const char* a1, const char* a2, const char* a3, const char* a4,
                             const char* a6, canht_curve** out) {
    if (!out) return CANHT_ERR_NULL;
    *out = nullptr;
    mpz_class c1, c2, c3, c4, c6;
    if (!parse_integer(a1, c1) || !parse_integer(a2, c2) || !parse_integer(a3, c3) ||
        !parse_integer(a4, c4) || !parse_integer(a6, c6))
        return CANHT_ERR_PARSE;
    return guarded([&] {
        auto model = WeierstrassModel::from_coefficients(c1, c2, c3, c4, c6);
        *out = new canht_curve{std::move(model)};
        return CANHT_OK;
    });
}

void canht_curve_free(canht_curve* c) { delete c; }

canht_status canht_curve_discriminant(const canht_curve* c, char** out) {
    if (!c || !out) return CANHT_ERR_NULL;
    *out = dup_string(c->model.delta.get_str());
    return *out ? CANHT_OK : CANHT_ERR_INTERNAL;
}

canht_status canht_compute(const canht_curve* c, const char* x, const char* y,
                           unsigned long precision_bits, const canht_options* opts,
                           canht_result** out) {
    if (!c || !out) return CANHT_ERR_NULL;
    *out = nullptr;
    if (precision_bits < 1 || precision_bits > (1ul << 24)) return CANHT_ERR_RANGE;
    if ((x == nullptr) != (y == nullptr)) return CANHT_ERR_PARSE;

    RationalPoint p = RationalPoint::at_infinity();
    if (x) {
        mpq_class qx, qy;
        if (!parse_rational(x, qx) || !parse_rational(y, qy)) return CANHT_ERR_PARSE;
        p = RationalPoint::affine(std::move(qx), std::move(qy));
    }

    PsiFiniteOptions fin;
    ArchMethod arch = ArchMethod::Agm;
    if (opts) {
        if (opts->arch_series) arch = ArchMethod::Series;
        fin.use_2b4_variant = opts->variant_2b4 != 0;
        fin.incremental_basis = opts->incremental_basis != 0;
        if (opts->trial_division) {
            mpz_class t;
            if (!parse_integer(opts->trial_division, t) || t < 1) return CANHT_ERR_PARSE;
            fin.trial_division_bound = t;
        }
    }

    return guarded([&] {
        if (!on_curve(c->model, p)) return CANHT_ERR_NOT_ON_CURVE;
        HeightBreakdown b =
            canonical_height(c->model, p, static_cast<mpfr_prec_t>(precision_bits), fin, arch);
        *out = new canht_result{std::move(b)};
        return CANHT_OK;
    });
}

void canht_result_free(canht_result* r) { delete r; }

canht_status canht_result_h_canonical(const canht_result* r, int digits, char** out) {
    if (!r || !out) return CANHT_ERR_NULL;
    return render(r->breakdown.h_canonical, digits, out);
}

canht_status canht_result_h_naive(const canht_result* r, int digits, char** out) {
    if (!r || !out) return CANHT_ERR_NULL;
    return render(r->breakdown.h_naive, digits, out);
}

canht_status canht_result_psi_finite_value(const canht_result* r, int digits, char** out) {
    if (!r || !out) return CANHT_ERR_NULL;
    return render(r->breakdown.psi_finite_value, digits, out);
}

canht_status canht_result_psi_infinity(const canht_result* r, int digits, char** out) {
    if (!r || !out) return CANHT_ERR_NULL;
    if (!r->breakdown.psi_infinity) return CANHT_ERR_RANGE;
    return render(*r->breakdown.psi_infinity, digits, out);
}

canht_status canht_result_torsion_order(const canht_result* r, unsigned* out) {
    if (!r || !out) return CANHT_ERR_NULL;
    *out = r->breakdown.torsion_order.value_or(0);
    return CANHT_OK;
}

canht_status canht_result_term_count(const canht_result* r, size_t* out) {
    if (!r || !out) return CANHT_ERR_NULL;
    *out = r->breakdown.psi_finite.terms.size();
    return CANHT_OK;
}

canht_status canht_result_term(const canht_result* r, size_t index, char** q_out, char** mu_out) {
    if (!r || !q_out || !mu_out) return CANHT_ERR_NULL;
    if (index >= r->breakdown.psi_finite.terms.size()) return CANHT_ERR_RANGE;
    const auto& [q, mu] = r->breakdown.psi_finite.terms[index];
    *q_out = dup_string(q.get_str());
    if (!*q_out) return CANHT_ERR_INTERNAL;
    *mu_out = dup_string(mu.get_str());
    if (!*mu_out) {
        canht_string_free(*q_out);
        *q_out = nullptr;
        return CANHT_ERR_INTERNAL;
    }
    return CANHT_OK;
}

}  // extern "C"
