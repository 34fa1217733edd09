// SPDX-License-Identifier: Apache-2.0
#include "conelab.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "conelab/arith.hpp"
#include "conelab/config.hpp"
#include "conelab/expsums.hpp"
#include "conelab/localdens.hpp"
#include "conelab/quadform.hpp"

using namespace conelab;

namespace {

thread_local std::string g_last_error;

clab_status status_of(errc code) {
  switch (code) {
    case errc::ok: return CLAB_OK;
    case errc::invalid_argument: return CLAB_E_INVALID;
    case errc::degenerate_form: return CLAB_E_DEGENERATE;
    case errc::even_modulus: return CLAB_E_EVEN_MODULUS;
    case errc::principal_character: return CLAB_E_PRINCIPAL;
    case errc::not_coprime: return CLAB_E_NOT_COPRIME;
    case errc::budget_exceeded: return CLAB_E_BUDGET;
    case errc::zero_dual: return CLAB_E_ZERO_DUAL;
    case errc::bad_extents: return CLAB_E_BAD_EXTENTS;
    case errc::not_stabilized: return CLAB_E_NOT_STABILIZED;
    case errc::insufficient_grid: return CLAB_E_GRID;
    case errc::asymmetric_weight: return CLAB_E_ASYMMETRIC;
    case errc::hypothesis_violated: return CLAB_E_HYPOTHESIS;
    case errc::config_invalid: return CLAB_E_CONFIG;
    case errc::internal: return CLAB_E_INTERNAL;
  }
  return CLAB_E_INTERNAL;
}

} // namespace

#define CLAB_TRY try {
#define CLAB_CATCH                                 \
  }                                                \
  catch (const Error& e) {                         \
    g_last_error = e.what();                       \
    return status_of(e.code());                    \
  }                                                \
  catch (const std::bad_alloc&) {                  \
    g_last_error = "out of memory";                \
    return CLAB_E_NOMEM;                           \
  }                                                \
  catch (const std::exception& e) {                \
    g_last_error = e.what();                       \
    return CLAB_E_INTERNAL;                        \
  }                                                \
  catch (...) {                                    \
    g_last_error = "unknown error";                \
    return CLAB_E_INTERNAL;                        \
  }

struct clab_form {
  TernaryForm form;
};

struct clab_sumctx {
  expsums::SumContext ctx;
};

extern "C" {

const char* clab_version(void) { return "0.1.0"; }

const char* clab_last_error(void) { return g_last_error.c_str(); }

clab_status clab_form_new(const int64_t coeffs[6], clab_form** out) {
  CLAB_TRY
  if (!coeffs || !out) fail(errc::invalid_argument, "null argument");
  std::array<i64, 6> c;
  for (int i = 0; i < 6; ++i) c[(size_t)i] = coeffs[i];
  auto* h = new clab_form{TernaryForm::from_coeffs(c)};
  *out = h;
  return CLAB_OK;
  CLAB_CATCH
}

void clab_form_free(clab_form* form) { delete form; }

clab_status clab_form_eval(const clab_form* form, const int64_t x[3], int64_t* out) {
  CLAB_TRY
  if (!form || !x || !out) fail(errc::invalid_argument, "null argument");
  *out = form->form.evaluate(Vec3i{x[0], x[1], x[2]});
  return CLAB_OK;
  CLAB_CATCH
}

clab_status clab_form_dual_eval(const clab_form* form, const int64_t c[3], int64_t* out) {
  CLAB_TRY
  if (!form || !c || !out) fail(errc::invalid_argument, "null argument");
  *out = form->form.dual_eval(Vec3i{c[0], c[1], c[2]});
  return CLAB_OK;
  CLAB_CATCH
}

clab_status clab_form_delta(const clab_form* form, int64_t* out) {
  CLAB_TRY
  if (!form || !out) fail(errc::invalid_argument, "null argument");
  *out = form->form.delta();
  return CLAB_OK;
  CLAB_CATCH
}

clab_status clab_form_signature(const clab_form* form, int* positives, int* negatives) {
  CLAB_TRY
  if (!form || !positives || !negatives) fail(errc::invalid_argument, "null argument");
  auto [p, n] = form->form.signature();
  *positives = p;
  *negatives = n;
  return CLAB_OK;
  CLAB_CATCH
}

clab_status clab_form_bad_modulus(const clab_form* form, int64_t L, int64_t* out) {
  CLAB_TRY
  if (!form || !out) fail(errc::invalid_argument, "null argument");
  *out = form->form.bad_modulus(L);
  return CLAB_OK;
  CLAB_CATCH
}

clab_status clab_jacobi(int64_t a, int64_t n, int* out) {
  CLAB_TRY
  if (!out) fail(errc::invalid_argument, "null argument");
  *out = arith::jacobi(a, n);
  return CLAB_OK;
  CLAB_CATCH
}

clab_status clab_mobius(int64_t n, int* out) {
  CLAB_TRY
  if (!out) fail(errc::invalid_argument, "null argument");
  *out = (int)arith::mobius(n);
  return CLAB_OK;
  CLAB_CATCH
}

clab_status clab_euler_phi(int64_t n, int64_t* out) {
  CLAB_TRY
  if (!out) fail(errc::invalid_argument, "null argument");
  *out = arith::euler_phi(n);
  return CLAB_OK;
  CLAB_CATCH
}

clab_status clab_gauss_iota(int64_t q, double* re, double* im) {
  CLAB_TRY
  if (!re || !im) fail(errc::invalid_argument, "null argument");
  cplx v = arith::gauss_iota(q);
  *re = v.real();
  *im = v.imag();
  return CLAB_OK;
  CLAB_CATCH
}

clab_status clab_salie_t(int64_t x, int64_t fstar, double* re, double* im) {
  CLAB_TRY
  if (!re || !im) fail(errc::invalid_argument, "null argument");
  cplx v = expsums::salie_T(x, fstar);
  *re = v.real();
  *im = v.imag();
  return CLAB_OK;
  CLAB_CATCH
}

clab_status clab_sumctx_new(const clab_form* form, int64_t L, const int64_t lambda[3],
                            clab_sumctx** out) {
  CLAB_TRY
  if (!form || !lambda || !out) fail(errc::invalid_argument, "null argument");
  auto* h = new clab_sumctx{
      expsums::SumContext::make(form->form, L, Vec3i{lambda[0], lambda[1], lambda[2]})};
  *out = h;
  return CLAB_OK;
  CLAB_CATCH
}

void clab_sumctx_free(clab_sumctx* ctx) { delete ctx; }

clab_status clab_sum_sq(const clab_sumctx* ctx, int64_t q, const int64_t c[3], double* re,
                        double* im) {
  CLAB_TRY
  if (!ctx || !c || !re || !im) fail(errc::invalid_argument, "null argument");
  cplx v = expsums::sum_Sq(ctx->ctx, q, Vec3i{c[0], c[1], c[2]});
  *re = v.real();
  *im = v.imag();
  return CLAB_OK;
  CLAB_CATCH
}

clab_status clab_local_density(const clab_form* form, int64_t p, int64_t L,
                               const int64_t* gamma3, int primitive, int64_t* num, int64_t* den,
                               int* stabilized) {
  CLAB_TRY
  if (!form || !num || !den || !stabilized) fail(errc::invalid_argument, "null argument");
  std::optional<localdens::CongruenceCondition> cond;
  if (gamma3)
    cond = localdens::CongruenceCondition::make(form->form, L,
                                                Vec3i{gamma3[0], gamma3[1], gamma3[2]});
  auto dv = localdens::local_density(form->form, p, cond, primitive != 0);
  *num = dv.value.num;
  *den = dv.value.den;
  *stabilized = dv.stabilized ? 1 : 0;
  return CLAB_OK;
  CLAB_CATCH
}

const char* const* clab_command_names(size_t* count) { return config::command_names(count); }

clab_status clab_run_json(const char* command, const char* config_json, char** report_json) {
  CLAB_TRY
  if (!command || !report_json) fail(errc::invalid_argument, "null argument");
  std::string report =
      config::run_command(command, config_json ? std::string(config_json) : std::string());
  char* buf = (char*)std::malloc(report.size() + 1);
  if (!buf) throw std::bad_alloc();
  std::memcpy(buf, report.c_str(), report.size() + 1);
  *report_json = buf;
  return CLAB_OK;
  CLAB_CATCH
}

void clab_string_free(char* s) { std::free(s); }

} // extern "C"
