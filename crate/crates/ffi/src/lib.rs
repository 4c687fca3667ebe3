//! C ABI over the core library. States are opaque handles created from
//! components or JSON; outputs are plain structs and caller-provided
//! buffers. Every entry point returns an RmhdStatus, never unwinds, and
//! leaves a human-readable detail message retrievable per thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use rmhd::cvs::{boundary_form, stability_margin, SheetSide};
use rmhd::error::Error;
use rmhd::eos::EosModel;
use rmhd::state::PrimitiveState;
use rmhd::sym_primary::MatrixQuadruple;
use rmhd::sym_secondary::{build_secondary, window_bound};
use rmhd::Vector8;

/// Result code of every API call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RmhdStatus {
    /// Success.
    RmhdOk = 0,
    /// Null pointer, malformed JSON, or an argument outside its domain.
    RmhdInvalidArgument = 1,
    /// The state violates the admissibility inequalities or the planar
    /// sheet constraints.
    RmhdInadmissibleState = 2,
    /// The family parameter lies outside the hyperbolicity window.
    RmhdWindowViolation = 3,
    /// The sheet pair is degenerate: parallel or vanishing tangential
    /// fields, or a singular parameter map.
    RmhdDegeneratePair = 4,
    /// An internal numerical procedure failed to converge or panicked.
    RmhdNumericalFailure = 5,
}

/// Opaque primitive state handle.
pub struct RmhdState {
    inner: PrimitiveState,
}

/// Pointwise admissibility report of a state.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct RmhdAdmissibility {
    pub rho: f64,
    pub a2: f64,
    pub cs2: f64,
    pub speed: f64,
    pub rho_positive: bool,
    pub pressure_derivative_positive: bool,
    pub causal: bool,
    pub subluminal: bool,
    pub admissible: bool,
}

/// Stability verdict for a planar current-vortex sheet pair. Index 0 is the
/// plus side, index 1 the minus side.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct RmhdStabilityReport {
    /// Stability margin; positive means stable.
    pub g: f64,
    /// Determinant of the tangential-field pair.
    pub det_tangential: f64,
    pub lambda_tilde: [f64; 2],
    pub lambda: [f64; 2],
    /// Per-side window bounds on lambda_tilde.
    pub bounds: [f64; 2],
    /// Sine of the angle between the tangential fields.
    pub sin_dphi: f64,
    pub nondegenerate: bool,
    pub stable: bool,
    pub windows_ok: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(status: RmhdStatus, message: &str) -> RmhdStatus {
    set_error(message);
    status
}

fn status_of(err: &Error) -> RmhdStatus {
    match err {
        Error::FiniteDifferenceUnstable { .. } => RmhdStatus::RmhdNumericalFailure,
        Error::WindowViolation { .. } => RmhdStatus::RmhdWindowViolation,
        Error::DegenerateTangentialFields { .. }
        | Error::ZeroTangentialField { .. }
        | Error::SingularMap { .. } => RmhdStatus::RmhdDegeneratePair,
        Error::InvalidInput(_) | Error::InvalidGamma { .. } => RmhdStatus::RmhdInvalidArgument,
        _ => RmhdStatus::RmhdInadmissibleState,
    }
}

fn from_core(err: Error) -> RmhdStatus {
    fail(status_of(&err), &err.to_string())
}

fn guarded(body: impl FnOnce() -> RmhdStatus) -> RmhdStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(
            RmhdStatus::RmhdNumericalFailure,
            "internal panic caught at the language boundary",
        ),
    }
}

unsafe fn state_ref<'a>(ptr: *const RmhdState) -> Option<&'a PrimitiveState> {
    ptr.as_ref().map(|s| &s.inner)
}

fn write_quadruple(quad: &MatrixQuadruple, out: *mut f64) {
    let mats = [&quad.a0, &quad.a[0], &quad.a[1], &quad.a[2]];
    let mut k = 0;
    for m in mats {
        for r in 0..8 {
            for c in 0..8 {
                unsafe { *out.add(k) = m[(r, c)] };
                k += 1;
            }
        }
    }
}

/// Create a state from components: pressure, 4-velocity spatial part u[3],
/// magnetic field h[3], specific entropy, and the adiabatic exponent of the
/// ideal gamma-law closure. On success writes a handle the caller must
/// release with rmhd_state_free.
///
/// # Safety
/// `u` and `h` must point to 3 doubles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rmhd_state_new(
    p: f64,
    u: *const f64,
    h: *const f64,
    s: f64,
    gamma: f64,
    out: *mut *mut RmhdState,
) -> RmhdStatus {
    guarded(|| {
        if u.is_null() || h.is_null() || out.is_null() {
            return fail(RmhdStatus::RmhdInvalidArgument, "null pointer argument");
        }
        let eos = match EosModel::new(gamma) {
            Ok(eos) => eos,
            Err(err) => return from_core(err),
        };
        let uv = unsafe { [*u, *u.add(1), *u.add(2)] };
        let hv = unsafe { [*h, *h.add(1), *h.add(2)] };
        let state = PrimitiveState::new(p, uv, hv, s, eos);
        if let Err(err) = state.derive() {
            return from_core(err);
        }
        unsafe { *out = Box::into_raw(Box::new(RmhdState { inner: state })) };
        RmhdStatus::RmhdOk
    })
}

/// Create a state from its JSON form
/// {"p": .., "u": [..], "H": [..], "S": .., "eos": {"gamma": ..}}.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rmhd_state_parse(
    json: *const c_char,
    out: *mut *mut RmhdState,
) -> RmhdStatus {
    guarded(|| {
        if json.is_null() || out.is_null() {
            return fail(RmhdStatus::RmhdInvalidArgument, "null pointer argument");
        }
        let text = match unsafe { CStr::from_ptr(json) }.to_str() {
            Ok(text) => text,
            Err(_) => return fail(RmhdStatus::RmhdInvalidArgument, "input is not valid UTF-8"),
        };
        let state: PrimitiveState = match serde_json::from_str(text) {
            Ok(state) => state,
            Err(err) => {
                return fail(
                    RmhdStatus::RmhdInvalidArgument,
                    &format!("state does not match the expected schema: {err}"),
                )
            }
        };
        if let Err(err) = state.derive() {
            return from_core(err);
        }
        unsafe { *out = Box::into_raw(Box::new(RmhdState { inner: state })) };
        RmhdStatus::RmhdOk
    })
}

/// Release a state handle. Null is ignored.
///
/// # Safety
/// `state` must be null or a handle produced by this library that has not
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn rmhd_state_free(state: *mut RmhdState) {
    if !state.is_null() {
        drop(unsafe { Box::from_raw(state) });
    }
}

/// Evaluate the admissibility report of a state. Always succeeds for a
/// non-null handle; the verdict is carried in the report flags.
///
/// # Safety
/// `state` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rmhd_state_check(
    state: *const RmhdState,
    out: *mut RmhdAdmissibility,
) -> RmhdStatus {
    guarded(|| {
        let (Some(st), false) = (unsafe { state_ref(state) }, out.is_null()) else {
            return fail(RmhdStatus::RmhdInvalidArgument, "null pointer argument");
        };
        let rep = st.check_hyperbolic();
        unsafe {
            *out = RmhdAdmissibility {
                rho: rep.rho,
                a2: rep.a2,
                cs2: rep.cs2,
                speed: rep.speed,
                rho_positive: rep.rho_positive,
                pressure_derivative_positive: rep.pressure_derivative_positive,
                causal: rep.causal,
                subluminal: rep.subluminal,
                admissible: rep.admissible,
            };
        }
        RmhdStatus::RmhdOk
    })
}

/// Assemble the base symmetric quadruple. `out` receives 256 doubles: the
/// four 8x8 matrices (temporal, then the three spatial directions), each
/// row-major, in the component order (p, u1, u2, u3, H1, H2, H3, S).
///
/// # Safety
/// `state` must be a live handle; `out` must point to 256 doubles.
#[no_mangle]
pub unsafe extern "C" fn rmhd_matrices_primary(
    state: *const RmhdState,
    out: *mut f64,
) -> RmhdStatus {
    guarded(|| {
        let (Some(st), false) = (unsafe { state_ref(state) }, out.is_null()) else {
            return fail(RmhdStatus::RmhdInvalidArgument, "null pointer argument");
        };
        match rmhd::sym_primary::build_quadruple(st) {
            Ok(quad) => {
                write_quadruple(&quad, out);
                RmhdStatus::RmhdOk
            }
            Err(err) => from_core(err),
        }
    })
}

/// Assemble the one-parameter alternative symmetrizer family at `lambda`.
/// Same output layout as rmhd_matrices_primary. At lambda = 0 the family
/// coincides with the base form up to assembly rounding (about 1e-11
/// relative). The window is not enforced here.
///
/// # Safety
/// `state` must be a live handle; `out` must point to 256 doubles.
#[no_mangle]
pub unsafe extern "C" fn rmhd_matrices_family(
    state: *const RmhdState,
    lambda: f64,
    out: *mut f64,
) -> RmhdStatus {
    guarded(|| {
        let (Some(st), false) = (unsafe { state_ref(state) }, out.is_null()) else {
            return fail(RmhdStatus::RmhdInvalidArgument, "null pointer argument");
        };
        match build_secondary(st, lambda) {
            Ok(kit) => {
                write_quadruple(&kit.quadruple, out);
                RmhdStatus::RmhdOk
            }
            Err(err) => from_core(err),
        }
    })
}

/// Hyperbolicity window bound m of the family parameter: the family's
/// temporal matrix stays positive definite for |lambda| < m.
///
/// # Safety
/// `state` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rmhd_window_bound(
    state: *const RmhdState,
    out: *mut f64,
) -> RmhdStatus {
    guarded(|| {
        let (Some(st), false) = (unsafe { state_ref(state) }, out.is_null()) else {
            return fail(RmhdStatus::RmhdInvalidArgument, "null pointer argument");
        };
        match window_bound(st) {
            Ok(bound) => {
                unsafe { *out = bound };
                RmhdStatus::RmhdOk
            }
            Err(err) => from_core(err),
        }
    })
}

/// Evaluate the linear stability of a planar current-vortex sheet from its
/// two side states. Sides must satisfy the planar constraints (vanishing
/// normal velocity and field along the first axis).
///
/// # Safety
/// `plus` and `minus` must be live handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rmhd_sheet_stability(
    plus: *const RmhdState,
    minus: *const RmhdState,
    det_eps: f64,
    out: *mut RmhdStabilityReport,
) -> RmhdStatus {
    guarded(|| {
        let (Some(sp), Some(sm), false) = (
            unsafe { state_ref(plus) },
            unsafe { state_ref(minus) },
            out.is_null(),
        ) else {
            return fail(RmhdStatus::RmhdInvalidArgument, "null pointer argument");
        };
        let sides = SheetSide::new(*sp).and_then(|p| Ok((p, SheetSide::new(*sm)?)));
        let (side_p, side_m) = match sides {
            Ok(pair) => pair,
            Err(err) => return from_core(err),
        };
        match stability_margin(&side_p, &side_m, det_eps) {
            Ok(rep) => {
                unsafe {
                    *out = RmhdStabilityReport {
                        g: rep.g,
                        det_tangential: rep.det_tangential,
                        lambda_tilde: rep.lambda_tilde,
                        lambda: rep.lambda,
                        bounds: rep.bounds,
                        sin_dphi: rep.sin_dphi,
                        nondegenerate: rep.nondegenerate,
                        stable: rep.stable,
                        windows_ok: rep.windows_ok,
                    };
                }
                RmhdStatus::RmhdOk
            }
            Err(err) => from_core(err),
        }
    })
}

/// Evaluate the boundary quadratic form of a sheet side at family parameter
/// `lambda` on the perturbation `du` (8 doubles in component order), through
/// both the matrix route and the closed form.
///
/// # Safety
/// `side` must be a live handle; `du` must point to 8 doubles; `quadratic`
/// and `closed` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn rmhd_boundary_form(
    side: *const RmhdState,
    lambda: f64,
    du: *const f64,
    quadratic: *mut f64,
    closed: *mut f64,
) -> RmhdStatus {
    guarded(|| {
        let (Some(st), false) = (unsafe { state_ref(side) }, du.is_null()) else {
            return fail(RmhdStatus::RmhdInvalidArgument, "null pointer argument");
        };
        if quadratic.is_null() || closed.is_null() {
            return fail(RmhdStatus::RmhdInvalidArgument, "null pointer argument");
        }
        let sheet = match SheetSide::new(*st) {
            Ok(sheet) => sheet,
            Err(err) => return from_core(err),
        };
        let mut pert = Vector8::zeros();
        for i in 0..8 {
            pert[i] = unsafe { *du.add(i) };
        }
        match boundary_form(&sheet, lambda, &pert) {
            Ok(form) => {
                unsafe {
                    *quadratic = form.quadratic;
                    *closed = form.closed;
                }
                RmhdStatus::RmhdOk
            }
            Err(err) => from_core(err),
        }
    })
}

/// Residual check of the quasilinear form against finite-difference
/// Jacobians of the conservative system at this state, over `trials`
/// seeded random constrained derivative draws at family parameter `lambda`
/// (0 selects the base form). Writes the maximum normalized residual.
///
/// # Safety
/// `state` must be a live handle; `max_residual` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rmhd_equivalence_residual(
    state: *const RmhdState,
    lambda: f64,
    trials: u32,
    seed: u64,
    max_residual: *mut f64,
) -> RmhdStatus {
    guarded(|| {
        let (Some(st), false) = (unsafe { state_ref(state) }, max_residual.is_null()) else {
            return fail(RmhdStatus::RmhdInvalidArgument, "null pointer argument");
        };
        let quad = match build_secondary(st, lambda) {
            Ok(kit) => kit.quadruple,
            Err(err) => return from_core(err),
        };
        match rmhd::conservative::equivalence_oracle(st, &quad, trials as usize, seed, 0.0) {
            Ok(report) => {
                unsafe { *max_residual = report.max_residual };
                RmhdStatus::RmhdOk
            }
            Err(err) => from_core(err),
        }
    })
}

/// Static description of a status code. Never null.
#[no_mangle]
pub extern "C" fn rmhd_strerror(status: RmhdStatus) -> *const c_char {
    let text: &'static [u8] = match status {
        RmhdStatus::RmhdOk => b"ok\0",
        RmhdStatus::RmhdInvalidArgument => b"invalid argument\0",
        RmhdStatus::RmhdInadmissibleState => b"inadmissible state\0",
        RmhdStatus::RmhdWindowViolation => b"family parameter outside the hyperbolicity window\0",
        RmhdStatus::RmhdDegeneratePair => b"degenerate sheet pair\0",
        RmhdStatus::RmhdNumericalFailure => b"internal numerical failure\0",
    };
    text.as_ptr() as *const c_char
}

/// Copy the detail message of this thread's most recent failure into `buf`
/// (NUL-terminated, truncated to `cap` bytes). Returns the full message
/// length in bytes, excluding the terminator.
///
/// # Safety
/// `buf` must point to `cap` writable bytes, or be null (only the length is
/// returned then).
#[no_mangle]
pub unsafe extern "C" fn rmhd_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            unsafe {
                std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
                *buf.add(n) = 0;
            }
        }
        bytes.len()
    })
}
