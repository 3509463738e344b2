/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef LSV_METROLOGY_H
#define LSV_METROLOGY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LsvStatus {
  LSV_STATUS_OK = 0,
  LSV_STATUS_NULL_POINTER = 1,
  LSV_STATUS_INVALID_ARGUMENT = 2,
  LSV_STATUS_COMPUTATION = 3,
  LSV_STATUS_BUFFER_TOO_SMALL = 4,
  LSV_STATUS_PANIC = 5,
} LsvStatus;

typedef enum LsvAxis {
  LSV_AXIS_X = 0,
  LSV_AXIS_Y = 1,
  LSV_AXIS_Z = 2,
} LsvAxis;

typedef enum LsvOperator {
  LSV_OPERATOR_JX = 0,
  LSV_OPERATOR_JY = 1,
  LSV_OPERATOR_JZ = 2,
  // Σᵢ (j_z⁽ⁱ⁾)² = n₊ + n₋.
  LSV_OPERATOR_GENERATOR = 3,
  // (-1)^n₀.
  LSV_OPERATOR_PARITY0 = 4,
} LsvOperator;

typedef enum LsvDickeFrame {
  LSV_DICKE_FRAME_PREPARED = 0,
  LSV_DICKE_FRAME_RAMSEY = 1,
} LsvDickeFrame;

// Opaque handle to a normalized state vector on the three-mode Fock basis.
typedef struct LsvState LsvState;

// Probe duration (s), trial count, particle number and single-particle spin
// given as 2j.
typedef struct LsvContext {
  double duration;
  uint64_t trials;
  size_t particles;
  int32_t spin_doubled;
} LsvContext;

typedef struct LsvPrecision {
  // rad/s.
  double delta_kappa;
  // Operating point κt; NaN for bounds.
  double kt;
  // F_Q for bounds, |signal slope| for measured protocols.
  double figure;
} LsvPrecision;

typedef struct LsvPowerLawFit {
  double prefactor;
  double exponent;
  double r_squared;
} LsvPowerLawFit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty after a success.
// Valid until the next call into this library on the same thread.
const char *lsv_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *lsv_version(void);

// Balanced spin-1 Dicke state of even N ≥ 2.
//
// # Safety
// `out` must be valid for a pointer write.
enum LsvStatus lsv_state_dicke(size_t n, struct LsvState **out);

// (|N,0,0⟩ + |0,N,0⟩)/√2.
//
// # Safety
// `out` must be valid for a pointer write.
enum LsvStatus lsv_state_noon(size_t n, struct LsvState **out);

// N-fold product of the single-particle state with amplitudes
// (re₊, im₊, re₀, im₀, re₋, im₋).
//
// # Safety
// `amps` must point to 6 doubles; `out` must be valid for a pointer write.
enum LsvStatus lsv_state_product(size_t n, const double *amps, struct LsvState **out);

// Releases a state; null is ignored.
//
// # Safety
// `state` must be null or a handle from this library not yet freed.
void lsv_state_free(struct LsvState *state);

// Basis dimension (N+1)(N+2)/2.
//
// # Safety
// `state` must be a live handle; `out` valid for a write.
enum LsvStatus lsv_state_dimension(const struct LsvState *state, size_t *out);

// Copies the amplitudes as interleaved (re, im) pairs into `buf` of
// `capacity` doubles; `len_out` receives the required count 2·dimension.
//
// # Safety
// `buf` must be valid for `capacity` doubles; `len_out` valid for a write.
enum LsvStatus lsv_state_amplitudes(const struct LsvState *state,
                                    double *buf,
                                    size_t capacity,
                                    size_t *len_out);

// exp(-i·angle·J_axis)|ψ⟩ as a new handle.
//
// # Safety
// `state` must be a live handle; `out` valid for a pointer write.
enum LsvStatus lsv_state_rotate(const struct LsvState *state,
                                enum LsvAxis axis,
                                double angle,
                                double tol,
                                struct LsvState **out);

// ⟨ψ|O|ψ⟩ for a collective operator.
//
// # Safety
// `state` must be a live handle; `out` valid for a write.
enum LsvStatus lsv_state_expectation(const struct LsvState *state,
                                     enum LsvOperator op,
                                     double *out);

// Pure-state F_Q = 4 Var(𝓗) with 𝓗 = Σᵢ (j_z⁽ⁱ⁾)².
//
// # Safety
// `state` must be a live handle; `out` valid for a write.
enum LsvStatus lsv_state_qfi(const struct LsvState *state, double *out);

// Balanced Dicke F_Q from the occupation distribution alone.
//
// # Safety
// `out` must be valid for a write.
enum LsvStatus lsv_qfi_dicke(size_t n, enum LsvDickeFrame dicke_frame, double *out);

// NOON F_Q = N².
//
// # Safety
// `out` must be valid for a write.
enum LsvStatus lsv_qfi_noon(size_t n, double *out);

// F_Q of the paired decoherence-free cat; quantum numbers given doubled.
//
// # Safety
// `out` must be valid for a write.
enum LsvStatus lsv_qfi_paired_dfs(size_t n,
                                  int32_t j_doubled,
                                  int32_t m_hi_doubled,
                                  int32_t m_lo_doubled,
                                  double *out);

// δκ ≥ 1/(T√ν√F_Q).
//
// # Safety
// `ctx` must be a valid pointer; `out` valid for a write.
enum LsvStatus lsv_qcrb(double fisher, const struct LsvContext *ctx, double *out);

// Heisenberg bound 1/(T√ν·N·(λmax − λmin)).
//
// # Safety
// `ctx` must be a valid pointer; `out` valid for a write.
enum LsvStatus lsv_hl_bound(const struct LsvContext *ctx, double *out);

// Copies p_k, k = 0..=N/2, into `buf`; `len_out` receives N/2 + 1.
//
// # Safety
// `buf` must be valid for `capacity` doubles; `len_out` valid for a write.
enum LsvStatus lsv_dicke_probabilities(size_t n, double *buf, size_t capacity, size_t *len_out);

// NOON parity signal ⟨(-1)^n₀⟩ after phase κt and a π/2 pulse.
//
// # Safety
// `out` must be valid for a write.
enum LsvStatus lsv_parity_signal(size_t n, double kt, double *out);

// Error-propagation precision of the parity measurement at κt.
//
// # Safety
// `ctx` must be a valid pointer; `out` valid for a write.
enum LsvStatus lsv_parity_precision(size_t n,
                                    double kt,
                                    const struct LsvContext *ctx,
                                    struct LsvPrecision *out);

// Best Jx²-moment precision of the Dicke state over a κt grid.
//
// # Safety
// `ctx` must be a valid pointer; `out` valid for a write.
enum LsvStatus lsv_moment_optimum(size_t n,
                                  const struct LsvContext *ctx,
                                  double kt_min,
                                  double kt_max,
                                  size_t points,
                                  struct LsvPrecision *out);

// Least-squares fit y ≈ a·N^γ in log-log space over `len` points.
//
// # Safety
// `ns` and `ys` must be valid for `len` doubles; `out` valid for a write.
enum LsvStatus lsv_power_law_fit(const double *ns,
                                 const double *ys,
                                 size_t len,
                                 struct LsvPowerLawFit *out);

// 10·log₁₀(F_Q/N).
//
// # Safety
// `out` must be valid for a write.
enum LsvStatus lsv_improvement_db(double fisher, size_t n, double *out);

// Diagonal rank-2 tensor element ⟨j,m|T₀⁽²⁾|j,m⟩ with j, m given doubled.
//
// # Safety
// `out` must be valid for a write.
enum LsvStatus lsv_wigner_eckart_diag(int32_t j_doubled,
                                      int32_t m_doubled,
                                      double reduced,
                                      double *out);

// C₀⁽²⁾ bound from δκ/2π (Hz), ΔE/(hC₀⁽²⁾) (Hz) and Δ(j_z²).
//
// # Safety
// `out` must be valid for a write.
enum LsvStatus lsv_kappa_to_c02(double delta_kappa_over_2pi,
                                double energy_ratio,
                                double jz2_fluct,
                                double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LSV_METROLOGY_H */
