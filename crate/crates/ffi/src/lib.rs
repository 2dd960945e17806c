//! C ABI over the cubewcd solver.
//!
//! Objects are opaque heap handles released by their matching `*_free`.
//! Fallible calls return a [`CwStatus`] and write results through out
//! pointers; on failure [`cw_last_error`] describes what went wrong on the
//! calling thread. Strings returned by the library are freed with
//! [`cw_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;
use std::time::Duration;

use cubewcd::bench::{build_policy, PolicySpec};
use cubewcd::cube::{state_space_size, CubeState, MoveSequence, StateKey};
use cubewcd::heuristic::{DistanceEvaluator, DistanceTable, EvalError, TableDistance};
use cubewcd::solver::{astar_solve, Heuristic, SearchLimits, Solution, SolveError};
use cubewcd::wcd::{WcdError, WcdParams};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidState = 3,
    Io = 4,
    Format = 5,
    OutOfRange = 6,
    LimitExceeded = 7,
    Internal = 8,
}

/// A cube state.
pub struct CwState(CubeState);

/// An exact distance table.
pub struct CwTable(Arc<DistanceTable>);

/// A solver result.
pub struct CwSolution(Solution);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(CwStatus, String);

impl Failure {
    fn arg(msg: impl Into<String>) -> Self {
        Failure(CwStatus::InvalidArgument, msg.into())
    }
}

impl From<WcdError> for Failure {
    fn from(e: WcdError) -> Self {
        let status = match e {
            WcdError::InvalidMu(_) => CwStatus::InvalidArgument,
            WcdError::BudgetExceeded { .. } => CwStatus::LimitExceeded,
            WcdError::Eval(EvalError::OutOfRange { .. }) => CwStatus::OutOfRange,
            WcdError::Eval(_) => CwStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn run(f: impl FnOnce() -> Result<(), Failure>) -> CwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            CwStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CwStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(CwStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::arg(format!("{name} is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(CwStatus::NullPointer, format!("{name} is null")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(
            CwStatus::NullPointer,
            "output pointer is null".into(),
        ));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

/// Message for the last failed call on this thread, or NULL. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn cw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by the library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of reachable cube states as a decimal string.
#[no_mangle]
pub extern "C" fn cw_state_space_size() -> *mut c_char {
    into_c_string(state_space_size().to_string())
}

/// A new solved cube.
#[no_mangle]
pub extern "C" fn cw_state_solved() -> *mut CwState {
    Box::into_raw(Box::new(CwState(CubeState::SOLVED)))
}

/// The solved cube after applying `moves` (e.g. `"R U f"`).
///
/// # Safety
/// `moves` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cw_state_from_moves(
    moves: *const c_char,
    out: *mut *mut CwState,
) -> CwStatus {
    run(|| {
        let seq: MoveSequence = str_arg(moves, "moves")?
            .parse()
            .map_err(|e| Failure::arg(format!("{e}")))?;
        write_out(
            out,
            Box::into_raw(Box::new(CwState(seq.apply_to(&CubeState::SOLVED)))),
        )
    })
}

/// Decodes a 26-digit hex state key.
///
/// # Safety
/// `hex` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cw_state_from_key_hex(
    hex: *const c_char,
    out: *mut *mut CwState,
) -> CwStatus {
    run(|| {
        let key =
            StateKey::from_hex(str_arg(hex, "hex")?).map_err(|e| Failure::arg(e.to_string()))?;
        let s =
            CubeState::from_key(key).map_err(|e| Failure(CwStatus::InvalidState, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(CwState(s))))
    })
}

/// Applies `moves` to `state` in place.
///
/// # Safety
/// `state` must be a live handle; `moves` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cw_state_apply_moves(
    state: *mut CwState,
    moves: *const c_char,
) -> CwStatus {
    run(|| {
        let seq: MoveSequence = str_arg(moves, "moves")?
            .parse()
            .map_err(|e| Failure::arg(format!("{e}")))?;
        let st = state
            .as_mut()
            .ok_or_else(|| Failure(CwStatus::NullPointer, "state is null".into()))?;
        st.0 = seq.apply_to(&st.0);
        Ok(())
    })
}

/// True when `state` is solved. NULL counts as not solved.
///
/// # Safety
/// `state` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cw_state_is_solved(state: *const CwState) -> bool {
    state.as_ref().is_some_and(|s| s.0.is_solved())
}

/// Canonical key of `state` as 26 hex digits; free with `cw_string_free`.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cw_state_key_hex(
    state: *const CwState,
    out: *mut *mut c_char,
) -> CwStatus {
    run(|| {
        let s = ref_arg(state, "state")?;
        write_out(out, into_c_string(s.0.canonical_key().to_hex()))
    })
}

/// # Safety
/// `state` must be NULL or a live handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn cw_state_free(state: *mut CwState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Builds the table of all states within `depth` moves of solved.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cw_table_build(depth: u8, out: *mut *mut CwTable) -> CwStatus {
    run(|| {
        let t = DistanceTable::build(depth)
            .map_err(|e| Failure(CwStatus::LimitExceeded, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(CwTable(Arc::new(t)))))
    })
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cw_table_load(path: *const c_char, out: *mut *mut CwTable) -> CwStatus {
    run(|| {
        let path = str_arg(path, "path")?;
        let t = DistanceTable::load(path).map_err(|e| match e {
            cubewcd::heuristic::TableError::Io(_) => Failure(CwStatus::Io, e.to_string()),
            _ => Failure(CwStatus::Format, e.to_string()),
        })?;
        write_out(out, Box::into_raw(Box::new(CwTable(Arc::new(t)))))
    })
}

/// # Safety
/// `table` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cw_table_save(table: *const CwTable, path: *const c_char) -> CwStatus {
    run(|| {
        let t = ref_arg(table, "table")?;
        let path = str_arg(path, "path")?;
        t.0.save(path)
            .map_err(|e| Failure(CwStatus::Io, e.to_string()))
    })
}

/// Number of stored states; 0 for NULL.
///
/// # Safety
/// `table` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cw_table_len(table: *const CwTable) -> usize {
    table.as_ref().map_or(0, |t| t.0.len())
}

/// Depth the table was built to; 0 for NULL.
///
/// # Safety
/// `table` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cw_table_max_depth(table: *const CwTable) -> u8 {
    table.as_ref().map_or(0, |t| t.0.max_depth())
}

/// Exact distance of `state`. Returns `OutOfRange` when the state lies
/// beyond the table.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cw_table_distance(
    table: *const CwTable,
    state: *const CwState,
    out: *mut u8,
) -> CwStatus {
    run(|| {
        let t = ref_arg(table, "table")?;
        let s = ref_arg(state, "state")?;
        let d =
            t.0.exact_distance(&s.0)
                .map_err(|e| Failure(CwStatus::OutOfRange, e.to_string()))?;
        write_out(out, d)
    })
}

/// # Safety
/// `table` must be NULL or a live handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn cw_table_free(table: *mut CwTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

unsafe fn heuristic(
    table: &CwTable,
    k: u32,
    mu: f64,
    policy: *const c_char,
) -> Result<Heuristic, Failure> {
    let spec: PolicySpec = if policy.is_null() {
        PolicySpec::Uniform
    } else {
        str_arg(policy, "policy")?
            .parse()
            .map_err(|e| Failure::arg(format!("{e}")))?
    };
    let params = WcdParams::new(mu, k as usize)?;
    let f_d: Arc<dyn DistanceEvaluator> = Arc::new(TableDistance::new(table.0.clone()));
    let f_p = build_policy(&spec, &f_d).map_err(|e| Failure::arg(e.to_string()))?;
    Ok(Heuristic::new(params, f_d, f_p))
}

/// WCD value of `state` over the table distance. `policy` is `"uniform"`,
/// `"boltzmann[:T]"`, `"mlp:PATH"` or NULL for uniform.
///
/// # Safety
/// Handles must be live; `policy` NULL or NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cw_wcd(
    table: *const CwTable,
    state: *const CwState,
    k: u32,
    mu: f64,
    policy: *const c_char,
    out: *mut f64,
) -> CwStatus {
    run(|| {
        let t = ref_arg(table, "table")?;
        let s = ref_arg(state, "state")?;
        let h = heuristic(t, k, mu, policy)?;
        write_out(out, h.h(&s.0)?)
    })
}

/// Runs A* from `state`. `max_nodes == 0` and `max_time_s <= 0` select
/// the default limits.
///
/// # Safety
/// Handles must be live; `policy` NULL or NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cw_solve(
    table: *const CwTable,
    state: *const CwState,
    k: u32,
    mu: f64,
    policy: *const c_char,
    max_nodes: u64,
    max_time_s: f64,
    out: *mut *mut CwSolution,
) -> CwStatus {
    run(|| {
        let t = ref_arg(table, "table")?;
        let s = ref_arg(state, "state")?;
        let h = heuristic(t, k, mu, policy)?;
        let mut limits = SearchLimits::default();
        if max_nodes > 0 {
            limits.max_closed_nodes = usize::try_from(max_nodes).unwrap_or(usize::MAX);
        }
        if max_time_s > 0.0 {
            limits.max_time = Duration::try_from_secs_f64(max_time_s)
                .map_err(|_| Failure::arg("max_time_s out of range"))?;
        }
        let sol = astar_solve(&s.0, &h, limits).map_err(|e| match e {
            SolveError::LimitExceeded { .. } => Failure(CwStatus::LimitExceeded, e.to_string()),
            SolveError::InvalidStart(_) => Failure(CwStatus::InvalidState, e.to_string()),
            SolveError::InvalidLimits => Failure::arg(e.to_string()),
            SolveError::Heuristic(w) => w.into(),
            SolveError::BrokenChain(_) => Failure(CwStatus::Internal, e.to_string()),
        })?;
        write_out(out, Box::into_raw(Box::new(CwSolution(sol))))
    })
}

/// Move count of the solution; 0 for NULL.
///
/// # Safety
/// `sol` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cw_solution_length(sol: *const CwSolution) -> usize {
    sol.as_ref().map_or(0, |s| s.0.length())
}

/// Closed states when the search ended; 0 for NULL.
///
/// # Safety
/// `sol` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cw_solution_searched_nodes(sol: *const CwSolution) -> usize {
    sol.as_ref().map_or(0, |s| s.0.searched_nodes)
}

/// The moves, space separated; free with `cw_string_free`.
///
/// # Safety
/// `sol` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cw_solution_moves(
    sol: *const CwSolution,
    out: *mut *mut c_char,
) -> CwStatus {
    run(|| {
        let s = ref_arg(sol, "solution")?;
        write_out(out, into_c_string(s.0.moves.to_string()))
    })
}

/// # Safety
/// `sol` must be NULL or a live handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn cw_solution_free(sol: *mut CwSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}
