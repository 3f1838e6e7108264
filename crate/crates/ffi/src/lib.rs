//! C interface.
//!
//! Every fallible call returns a [`GenStatus`]; on failure the message is
//! available from [`gen_last_error`] on the same thread. Objects are opaque
//! handles released with their `_free` function. Strings returned to the
//! caller are released with [`gen_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use genericity::exact_torus::{classify_matrix, l1_norm, IntMatrix2, NTType};
use genericity::experiments::{engine_density, torus_density, CountReport, EngineConfig, TorusNorm};
use genericity::lamination::classify::{classify_word, ClassifyBudget, Verdict};
use genericity::lamination::library::GeneratorLibrary;
use genericity::lamination::SurfaceSpec;
use genericity::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenStatus {
    Ok = 0,
    InvalidInput = 1,
    Budget = 2,
    Parse = 3,
    Io = 4,
    NullPointer = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    Periodic = 0,
    Reducible = 1,
    PseudoAnosov = 2,
    Unresolved = 3,
}

/// One classification: `order` is set for periodic elements, `dilatation`
/// for pseudo-Anosov ones (zero otherwise).
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenVerdict {
    pub kind: GenKind,
    pub order: u32,
    pub dilatation: f64,
}

/// One row of a density report.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenCountRow {
    pub l: i64,
    pub total: u64,
    pub periodic: u64,
    pub reducible: u64,
    pub pseudo_anosov: u64,
    pub unresolved: u64,
    pub fraction: f64,
    pub certified_fraction: f64,
    pub complete: bool,
}

/// An element of `SL(2, Z)` with arbitrary-precision entries.
pub struct GenMatrix(IntMatrix2);

/// Counts along a grid of ball sizes.
pub struct GenReport(CountReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> GenStatus {
    match e {
        Error::InvalidInput(_) => GenStatus::InvalidInput,
        Error::Budget(_) => GenStatus::Budget,
        Error::Parse { .. } => GenStatus::Parse,
        Error::Io(_) => GenStatus::Io,
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (GenStatus, String)>) -> GenStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            GenStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            GenStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (GenStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (GenStatus, String) {
    (GenStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (GenStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| (GenStatus::InvalidInput, format!("{what} is not UTF-8")))
}

unsafe fn read_grid<'a>(grid: *const i64, len: usize) -> Result<&'a [i64], (GenStatus, String)> {
    if grid.is_null() {
        return Err(null("grid"));
    }
    Ok(std::slice::from_raw_parts(grid, len))
}

fn torus_verdict(t: &NTType) -> GenVerdict {
    match t {
        NTType::Periodic { order } => GenVerdict { kind: GenKind::Periodic, order: *order, dilatation: 0.0 },
        NTType::Reducible => GenVerdict { kind: GenKind::Reducible, order: 0, dilatation: 0.0 },
        NTType::PseudoAnosov { dilatation, .. } => {
            GenVerdict { kind: GenKind::PseudoAnosov, order: 0, dilatation: *dilatation }
        }
    }
}

fn engine_verdict(v: &Verdict) -> GenVerdict {
    let kind = match v {
        Verdict::Periodic(_) => GenKind::Periodic,
        Verdict::ReducibleCertified(_) => GenKind::Reducible,
        Verdict::PseudoAnosovCandidate { .. } => GenKind::PseudoAnosov,
        Verdict::Unresolved => GenKind::Unresolved,
    };
    let order = if let Verdict::Periodic(n) = v { *n } else { 0 };
    GenVerdict { kind, order, dilatation: v.dilatation().unwrap_or(0.0) }
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn gen_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn gen_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn gen_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the matrix `[[a, b], [c, d]]`; fails unless `ad - bc = 1`.
///
/// # Safety
/// `out` must be a valid pointer to write a handle into.
#[no_mangle]
pub unsafe extern "C" fn gen_matrix_new(a: i64, b: i64, c: i64, d: i64, out: *mut *mut GenMatrix) -> GenStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let m = IntMatrix2::from_i64(a, b, c, d).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(GenMatrix(m)));
        Ok(())
    })
}

/// Parses `"a,b,c,d"` with entries of any size.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gen_matrix_parse(text: *const c_char, out: *mut *mut GenMatrix) -> GenStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = read_str(text, "text")?;
        let m = genericity::cli::spec::parse_matrix(s).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(GenMatrix(m)));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn gen_matrix_free(m: *mut GenMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Product `x * y` as a new handle.
///
/// # Safety
/// `x` and `y` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gen_matrix_mul(x: *const GenMatrix, y: *const GenMatrix, out: *mut *mut GenMatrix) -> GenStatus {
    guard(|| {
        if x.is_null() || y.is_null() || out.is_null() {
            return Err(null("argument"));
        }
        *out = Box::into_raw(Box::new(GenMatrix(&(*x).0 * &(*y).0)));
        Ok(())
    })
}

/// `|a| + |b| + |c| + |d|` as a decimal string, freed with
/// [`gen_string_free`].
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gen_matrix_l1_norm(m: *const GenMatrix, out: *mut *mut c_char) -> GenStatus {
    guard(|| {
        if m.is_null() || out.is_null() {
            return Err(null("argument"));
        }
        *out = CString::new(l1_norm(&(*m).0).to_string()).expect("digits").into_raw();
        Ok(())
    })
}

/// Exact Nielsen-Thurston type.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gen_matrix_classify(m: *const GenMatrix, out: *mut GenVerdict) -> GenStatus {
    guard(|| {
        if m.is_null() || out.is_null() {
            return Err(null("argument"));
        }
        *out = torus_verdict(&classify_matrix(&(*m).0));
        Ok(())
    })
}

/// Heuristic type of a generator word on the surface of genus `genus` with
/// `punctures` punctures. Letters name the library generators, uppercase
/// for inverses, and the rightmost letter acts first.
///
/// # Safety
/// `word` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gen_classify_word(
    genus: u32,
    punctures: u32,
    word: *const c_char,
    out: *mut GenVerdict,
) -> GenStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let w = read_str(word, "word")?;
        let s = SurfaceSpec::new(genus, punctures).map_err(lib_err)?;
        let lib = GeneratorLibrary::standard();
        let sl = lib.get(s).map_err(lib_err)?;
        let spelled = sl.spell(if w.is_empty() { "1" } else { w }).map_err(lib_err)?;
        let v = classify_word(&sl.triangulation, &spelled, ClassifyBudget::default()).map_err(lib_err)?;
        *out = engine_verdict(&v);
        Ok(())
    })
}

/// Exact torus counts over `{m : |a|+|b|+|c|+|d| <= L}` for each `L` in
/// the increasing `grid`.
///
/// # Safety
/// `grid` must point to `len` values and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gen_torus_density(grid: *const i64, len: usize, out: *mut *mut GenReport) -> GenStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let r = torus_density(&TorusNorm::L1, read_grid(grid, len)?).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(GenReport(r)));
        Ok(())
    })
}

/// Orbit-ball counts on a general surface. `max_nodes = 0` keeps the
/// default search cap. An incomplete search still returns a report, with
/// status `GEN_STATUS_BUDGET` and rows flagged incomplete.
///
/// # Safety
/// `grid` must point to `len` values and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gen_engine_density(
    genus: u32,
    punctures: u32,
    grid: *const i64,
    len: usize,
    max_nodes: usize,
    out: *mut *mut GenReport,
) -> GenStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = SurfaceSpec::new(genus, punctures).map_err(lib_err)?;
        let mut config = EngineConfig::new(s);
        if max_nodes > 0 {
            config.limits.max_nodes = max_nodes;
        }
        let r = engine_density(&config, read_grid(grid, len)?).map_err(lib_err)?;
        let complete = r.complete();
        *out = Box::into_raw(Box::new(GenReport(r)));
        if complete {
            Ok(())
        } else {
            Err((GenStatus::Budget, "search cap reached; counts are lower bounds".into()))
        }
    })
}

/// # Safety
/// `r` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn gen_report_free(r: *mut GenReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of rows; zero for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gen_report_len(r: *const GenReport) -> usize {
    r.as_ref().map_or(0, |r| r.0.rows.len())
}

/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gen_report_row(r: *const GenReport, index: usize, out: *mut GenCountRow) -> GenStatus {
    guard(|| {
        if r.is_null() || out.is_null() {
            return Err(null("argument"));
        }
        let rows = &(*r).0.rows;
        let row = rows
            .get(index)
            .ok_or_else(|| (GenStatus::InvalidInput, format!("row {index} out of range ({} rows)", rows.len())))?;
        *out = GenCountRow {
            l: row.l,
            total: row.total,
            periodic: row.periodic,
            reducible: row.reducible,
            pseudo_anosov: row.pseudo_anosov,
            unresolved: row.unresolved,
            fraction: row.fraction(),
            certified_fraction: row.certified_fraction(),
            complete: row.complete,
        };
        Ok(())
    })
}

/// The report as JSON, freed with [`gen_string_free`].
///
/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gen_report_to_json(r: *const GenReport, out: *mut *mut c_char) -> GenStatus {
    guard(|| {
        if r.is_null() || out.is_null() {
            return Err(null("argument"));
        }
        let json = serde_json::to_string(&(*r).0).map_err(|e| (GenStatus::Io, e.to_string()))?;
        *out = CString::new(json).map_err(|e| (GenStatus::Io, e.to_string()))?.into_raw();
        Ok(())
    })
}

/// Runs the command-line front end on `argc` arguments (program name
/// excluded) and returns its exit code. Output goes to standard output.
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn gen_cli_run(argc: usize, argv: *const *const c_char) -> i32 {
    let mut args = vec!["genericity".to_string()];
    if argc > 0 {
        if argv.is_null() {
            set_error("argv is null");
            return genericity::cli::EXIT_INVALID;
        }
        for i in 0..argc {
            match read_str(*argv.add(i), "argument") {
                Ok(s) => args.push(s.to_string()),
                Err((_, msg)) => {
                    set_error(msg);
                    return genericity::cli::EXIT_INVALID;
                }
            }
        }
    }
    catch_unwind(|| genericity::cli::parse_and_run(args)).unwrap_or_else(|_| {
        set_error("internal panic");
        genericity::cli::EXIT_BUDGET
    })
}
