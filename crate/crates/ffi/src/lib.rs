//! C ABI over `lsv_metrology`.
//!
//! Every function returns an [`LsvStatus`]; results go through out-pointers.
//! On failure the thread-local message from [`lsv_last_error_message`]
//! describes the cause. States are opaque [`LsvState`] handles released with
//! [`lsv_state_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use lsv_metrology::analysis::{improvement_db, kappa_to_c02, power_law_fit, wigner_eckart_diag, SensitivityInput};
use lsv_metrology::metrology::{hl_bound, qcrb, qfi_cat, qfi_dicke, qfi_pure};
use lsv_metrology::protocols::{optimal_moment_precision, parity_precision, parity_signal, KtGrid};
use lsv_metrology::states::{dicke_balanced, dicke_probabilities, noon_state, paired_dfs_cat, product_state};
use lsv_metrology::{
    Axis, CollectiveOperator, DickeFrame, Error, EstimationContext, HalfInteger, OperatorKind, PrecisionResult,
    StateVector,
};
use num_complex::Complex64 as C64;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LsvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Computation = 3,
    BufferTooSmall = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LsvAxis {
    X = 0,
    Y = 1,
    Z = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LsvOperator {
    Jx = 0,
    Jy = 1,
    Jz = 2,
    /// Σᵢ (j_z⁽ⁱ⁾)² = n₊ + n₋.
    Generator = 3,
    /// (-1)^n₀.
    Parity0 = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LsvDickeFrame {
    Prepared = 0,
    Ramsey = 1,
}

/// Probe duration (s), trial count, particle number and single-particle spin
/// given as 2j.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct LsvContext {
    pub duration: f64,
    pub trials: u64,
    pub particles: usize,
    pub spin_doubled: i32,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct LsvPrecision {
    /// rad/s.
    pub delta_kappa: f64,
    /// Operating point κt; NaN for bounds.
    pub kt: f64,
    /// F_Q for bounds, |signal slope| for measured protocols.
    pub figure: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct LsvPowerLawFit {
    pub prefactor: f64,
    pub exponent: f64,
    pub r_squared: f64,
}

/// Opaque handle to a normalized state vector on the three-mode Fock basis.
pub struct LsvState(StateVector);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let text = CString::new(msg.into().replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

struct Failure(LsvStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::NonConvergence { .. }
            | Error::DerivativeMismatch { .. }
            | Error::NegativeVariance(_)
            | Error::UnboundedPrecision { .. }
            | Error::AllUnbounded
            | Error::ComplexExpectation(_) => LsvStatus::Computation,
            _ => LsvStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(LsvStatus::NullPointer, format!("{name} is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(LsvStatus::InvalidArgument, msg.into())
}

/// Runs `f`, converting errors and panics into a status and the thread-local message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LsvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            LsvStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            LsvStatus::Panic
        }
    }
}

/// # Safety
/// `out` must be null or valid for a write of `T`.
unsafe fn write<T>(out: *mut T, name: &str, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

fn context(ctx: &LsvContext) -> Result<EstimationContext, Failure> {
    let spin = HalfInteger::from_doubled(ctx.spin_doubled);
    if ctx.spin_doubled < 0 {
        return Err(invalid(format!("spin must be non-negative, got {spin}")));
    }
    Ok(EstimationContext::new(ctx.duration, ctx.trials, ctx.particles, spin)?)
}

fn precision(r: &PrecisionResult) -> LsvPrecision {
    LsvPrecision { delta_kappa: r.delta_kappa, kt: r.kt.unwrap_or(f64::NAN), figure: r.figure }
}

fn frame(f: LsvDickeFrame) -> DickeFrame {
    match f {
        LsvDickeFrame::Prepared => DickeFrame::Prepared,
        LsvDickeFrame::Ramsey => DickeFrame::Ramsey,
    }
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn lsv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lsv_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version literal is NUL-terminated"),
    };
    VERSION.as_ptr()
}

// --- states -------------------------------------------------------------------

fn new_state(out: *mut *mut LsvState, state: StateVector) -> Result<(), Failure> {
    // SAFETY: checked for null inside `write`; caller guarantees validity.
    unsafe { write(out, "out", Box::into_raw(Box::new(LsvState(state)))) }
}

/// Balanced spin-1 Dicke state of even N ≥ 2.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn lsv_state_dicke(n: usize, out: *mut *mut LsvState) -> LsvStatus {
    guard(|| new_state(out, dicke_balanced(n)?))
}

/// (|N,0,0⟩ + |0,N,0⟩)/√2.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn lsv_state_noon(n: usize, out: *mut *mut LsvState) -> LsvStatus {
    guard(|| new_state(out, noon_state(n)?.to_state_vector()?))
}

/// N-fold product of the single-particle state with amplitudes
/// (re₊, im₊, re₀, im₀, re₋, im₋).
///
/// # Safety
/// `amps` must point to 6 doubles; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn lsv_state_product(n: usize, amps: *const f64, out: *mut *mut LsvState) -> LsvStatus {
    guard(|| {
        if amps.is_null() {
            return Err(null("amps"));
        }
        let a = std::slice::from_raw_parts(amps, 6);
        let amps = [C64::new(a[0], a[1]), C64::new(a[2], a[3]), C64::new(a[4], a[5])];
        new_state(out, product_state(n, amps)?)
    })
}

/// Releases a state; null is ignored.
///
/// # Safety
/// `state` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lsv_state_free(state: *mut LsvState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

unsafe fn state_ref<'a>(state: *const LsvState) -> Result<&'a StateVector, Failure> {
    state.as_ref().map(|s| &s.0).ok_or_else(|| null("state"))
}

/// Basis dimension (N+1)(N+2)/2.
///
/// # Safety
/// `state` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lsv_state_dimension(state: *const LsvState, out: *mut usize) -> LsvStatus {
    guard(|| write(out, "out", state_ref(state)?.basis().len()))
}

/// Copies the amplitudes as interleaved (re, im) pairs into `buf` of
/// `capacity` doubles; `len_out` receives the required count 2·dimension.
///
/// # Safety
/// `buf` must be valid for `capacity` doubles; `len_out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lsv_state_amplitudes(
    state: *const LsvState,
    buf: *mut f64,
    capacity: usize,
    len_out: *mut usize,
) -> LsvStatus {
    guard(|| {
        let amps = state_ref(state)?.amplitudes();
        write(len_out, "len_out", 2 * amps.len())?;
        if capacity < 2 * amps.len() {
            return Err(Failure(LsvStatus::BufferTooSmall, format!("need {} doubles, got {capacity}", 2 * amps.len())));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        for (i, c) in amps.iter().enumerate() {
            buf.add(2 * i).write(c.re);
            buf.add(2 * i + 1).write(c.im);
        }
        Ok(())
    })
}

/// exp(-i·angle·J_axis)|ψ⟩ as a new handle.
///
/// # Safety
/// `state` must be a live handle; `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn lsv_state_rotate(
    state: *const LsvState,
    axis: LsvAxis,
    angle: f64,
    tol: f64,
    out: *mut *mut LsvState,
) -> LsvStatus {
    guard(|| {
        let axis = match axis {
            LsvAxis::X => Axis::X,
            LsvAxis::Y => Axis::Y,
            LsvAxis::Z => Axis::Z,
        };
        new_state(out, state_ref(state)?.apply_rotation(axis, angle, tol)?)
    })
}

fn operator_kind(op: LsvOperator) -> OperatorKind {
    match op {
        LsvOperator::Jx => OperatorKind::Jx,
        LsvOperator::Jy => OperatorKind::Jy,
        LsvOperator::Jz => OperatorKind::Jz,
        LsvOperator::Generator => OperatorKind::Generator,
        LsvOperator::Parity0 => OperatorKind::Parity0,
    }
}

/// ⟨ψ|O|ψ⟩ for a collective operator.
///
/// # Safety
/// `state` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lsv_state_expectation(state: *const LsvState, op: LsvOperator, out: *mut f64) -> LsvStatus {
    guard(|| {
        let s = state_ref(state)?;
        let value = CollectiveOperator::build(s.basis(), operator_kind(op)).expectation(s)?;
        write(out, "out", value)
    })
}

/// Pure-state F_Q = 4 Var(𝓗) with 𝓗 = Σᵢ (j_z⁽ⁱ⁾)².
///
/// # Safety
/// `state` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lsv_state_qfi(state: *const LsvState, out: *mut f64) -> LsvStatus {
    guard(|| {
        let s = state_ref(state)?;
        let value = qfi_pure(s, &CollectiveOperator::build(s.basis(), OperatorKind::Generator))?;
        write(out, "out", value)
    })
}

// --- Fisher information and bounds --------------------------------------------

/// Balanced Dicke F_Q from the occupation distribution alone.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lsv_qfi_dicke(n: usize, dicke_frame: LsvDickeFrame, out: *mut f64) -> LsvStatus {
    guard(|| write(out, "out", qfi_dicke(n, frame(dicke_frame))?))
}

/// NOON F_Q = N².
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lsv_qfi_noon(n: usize, out: *mut f64) -> LsvStatus {
    guard(|| write(out, "out", qfi_cat(&noon_state(n)?)))
}

/// F_Q of the paired decoherence-free cat; quantum numbers given doubled.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lsv_qfi_paired_dfs(
    n: usize,
    j_doubled: i32,
    m_hi_doubled: i32,
    m_lo_doubled: i32,
    out: *mut f64,
) -> LsvStatus {
    guard(|| {
        let cat = paired_dfs_cat(
            n,
            HalfInteger::from_doubled(j_doubled),
            HalfInteger::from_doubled(m_hi_doubled),
            HalfInteger::from_doubled(m_lo_doubled),
        )?;
        write(out, "out", qfi_cat(&cat))
    })
}

/// δκ ≥ 1/(T√ν√F_Q).
///
/// # Safety
/// `ctx` must be a valid pointer; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lsv_qcrb(fisher: f64, ctx: *const LsvContext, out: *mut f64) -> LsvStatus {
    guard(|| {
        let ctx = context(ctx.as_ref().ok_or_else(|| null("ctx"))?)?;
        write(out, "out", qcrb(fisher, &ctx)?)
    })
}

/// Heisenberg bound 1/(T√ν·N·(λmax − λmin)).
///
/// # Safety
/// `ctx` must be a valid pointer; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lsv_hl_bound(ctx: *const LsvContext, out: *mut f64) -> LsvStatus {
    guard(|| {
        let ctx = context(ctx.as_ref().ok_or_else(|| null("ctx"))?)?;
        write(out, "out", hl_bound(&ctx)?)
    })
}

/// Copies p_k, k = 0..=N/2, into `buf`; `len_out` receives N/2 + 1.
///
/// # Safety
/// `buf` must be valid for `capacity` doubles; `len_out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lsv_dicke_probabilities(
    n: usize,
    buf: *mut f64,
    capacity: usize,
    len_out: *mut usize,
) -> LsvStatus {
    guard(|| {
        let p = dicke_probabilities(n)?;
        write(len_out, "len_out", p.len())?;
        if capacity < p.len() {
            return Err(Failure(LsvStatus::BufferTooSmall, format!("need {} doubles, got {capacity}", p.len())));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        std::ptr::copy_nonoverlapping(p.as_ptr(), buf, p.len());
        Ok(())
    })
}

// --- protocols ----------------------------------------------------------------

/// NOON parity signal ⟨(-1)^n₀⟩ after phase κt and a π/2 pulse.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lsv_parity_signal(n: usize, kt: f64, out: *mut f64) -> LsvStatus {
    guard(|| write(out, "out", parity_signal(n, kt)?))
}

/// Error-propagation precision of the parity measurement at κt.
///
/// # Safety
/// `ctx` must be a valid pointer; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lsv_parity_precision(
    n: usize,
    kt: f64,
    ctx: *const LsvContext,
    out: *mut LsvPrecision,
) -> LsvStatus {
    guard(|| {
        let ctx = context(ctx.as_ref().ok_or_else(|| null("ctx"))?)?.with_particles(n);
        write(out, "out", precision(&parity_precision(n, kt, &ctx)?))
    })
}

/// Best Jx²-moment precision of the Dicke state over a κt grid.
///
/// # Safety
/// `ctx` must be a valid pointer; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lsv_moment_optimum(
    n: usize,
    ctx: *const LsvContext,
    kt_min: f64,
    kt_max: f64,
    points: usize,
    out: *mut LsvPrecision,
) -> LsvStatus {
    guard(|| {
        let ctx = context(ctx.as_ref().ok_or_else(|| null("ctx"))?)?;
        let grid = KtGrid::new(kt_min, kt_max, points)?;
        write(out, "out", precision(&optimal_moment_precision(n, &ctx, &grid)?))
    })
}

// --- analysis -----------------------------------------------------------------

/// Least-squares fit y ≈ a·N^γ in log-log space over `len` points.
///
/// # Safety
/// `ns` and `ys` must be valid for `len` doubles; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lsv_power_law_fit(
    ns: *const f64,
    ys: *const f64,
    len: usize,
    out: *mut LsvPowerLawFit,
) -> LsvStatus {
    guard(|| {
        if ns.is_null() {
            return Err(null("ns"));
        }
        if ys.is_null() {
            return Err(null("ys"));
        }
        let (ns, ys) = (std::slice::from_raw_parts(ns, len), std::slice::from_raw_parts(ys, len));
        let points: Vec<(f64, f64)> = ns.iter().copied().zip(ys.iter().copied()).collect();
        let fit = power_law_fit(&points)?;
        write(out, "out", LsvPowerLawFit { prefactor: fit.prefactor, exponent: fit.exponent, r_squared: fit.r_squared })
    })
}

/// 10·log₁₀(F_Q/N).
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lsv_improvement_db(fisher: f64, n: usize, out: *mut f64) -> LsvStatus {
    guard(|| write(out, "out", improvement_db(fisher, n)?))
}

/// Diagonal rank-2 tensor element ⟨j,m|T₀⁽²⁾|j,m⟩ with j, m given doubled.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lsv_wigner_eckart_diag(j_doubled: i32, m_doubled: i32, reduced: f64, out: *mut f64) -> LsvStatus {
    guard(|| {
        let value =
            wigner_eckart_diag(HalfInteger::from_doubled(j_doubled), HalfInteger::from_doubled(m_doubled), reduced)?;
        write(out, "out", value)
    })
}

/// C₀⁽²⁾ bound from δκ/2π (Hz), ΔE/(hC₀⁽²⁾) (Hz) and Δ(j_z²).
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lsv_kappa_to_c02(
    delta_kappa_over_2pi: f64,
    energy_ratio: f64,
    jz2_fluct: f64,
    out: *mut f64,
) -> LsvStatus {
    guard(|| {
        let input = SensitivityInput::new(delta_kappa_over_2pi, energy_ratio, jz2_fluct)?;
        write(out, "out", kappa_to_c02(&input)?)
    })
}
