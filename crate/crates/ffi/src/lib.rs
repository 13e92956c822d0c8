//! C interface to `floquet-core`.
//!
//! Every function returns an [`FqStatus`]; results go through out-pointers.
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `*_free` function. The message of the last failure on the
//! calling thread is available from [`fq_last_error`].

use floquet_core::code::report_parameters;
use floquet_core::decoder::{sample_and_decode, Decoder, DecoderConfig};
use floquet_core::dem::{build_detector_model, DetectorModel};
use floquet_core::homology::cocycle_basis;
use floquet_core::lattice::{ColoredLattice, LatticeError};
use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Parse = 4,
    InvalidLattice = 5,
    Simulation = 6,
    Panic = 7,
}

/// A validated edge-colored lattice.
pub struct FqLattice(ColoredLattice);

/// A detector model of a lattice at fixed rounds and error rate.
pub struct FqSimulator(DetectorModel);

/// Code parameters `[[n, k, d]]`, genus and rate `k / n`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FqParams {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub genus: usize,
    pub rate: f64,
}

/// Failure counts of a batch of shots.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FqCounts {
    pub shots: u64,
    pub fails_any: u64,
    pub fails_one: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|e| {
        let mut e = e.borrow_mut();
        e.clear();
        e.extend_from_slice(msg.as_bytes());
    });
}

fn fail(status: FqStatus, msg: impl std::fmt::Display) -> FqStatus {
    set_error(&msg.to_string());
    status
}

fn lattice_status(e: &LatticeError) -> FqStatus {
    match e {
        LatticeError::Io { .. } => FqStatus::Io,
        LatticeError::Parse { .. } => FqStatus::Parse,
        _ => FqStatus::InvalidLattice,
    }
}

/// Runs `f`, turning a panic into [`FqStatus::Panic`].
fn guard(f: impl FnOnce() -> FqStatus) -> FqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(FqStatus::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, FqStatus> {
    if s.is_null() {
        return Err(fail(FqStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(FqStatus::InvalidArgument, "string is not UTF-8"))
}

fn lattice_result(r: Result<ColoredLattice, LatticeError>, out: *mut *mut FqLattice) -> FqStatus {
    match r {
        Ok(l) => {
            unsafe { *out = Box::into_raw(Box::new(FqLattice(l))) };
            FqStatus::Ok
        }
        Err(e) => fail(lattice_status(&e), e),
    }
}

/// Parses a lattice from text in the lattice file format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fq_lattice_parse(
    text: *const c_char,
    out: *mut *mut FqLattice,
) -> FqStatus {
    guard(|| {
        if out.is_null() {
            return fail(FqStatus::NullPointer, "null output pointer");
        }
        match str_arg(text) {
            Ok(t) => lattice_result(ColoredLattice::parse(t), out),
            Err(s) => s,
        }
    })
}

/// Loads a lattice file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fq_lattice_load(
    path: *const c_char,
    out: *mut *mut FqLattice,
) -> FqStatus {
    guard(|| {
        if out.is_null() {
            return fail(FqStatus::NullPointer, "null output pointer");
        }
        match str_arg(path) {
            Ok(p) => lattice_result(ColoredLattice::load(p), out),
            Err(s) => s,
        }
    })
}

/// Releases a lattice; null is ignored.
///
/// # Safety
/// `lattice` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fq_lattice_free(lattice: *mut FqLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// Number of qubits (vertices) of a lattice.
///
/// # Safety
/// `lattice` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fq_lattice_num_qubits(
    lattice: *const FqLattice,
    out: *mut usize,
) -> FqStatus {
    guard(|| {
        if lattice.is_null() || out.is_null() {
            return fail(FqStatus::NullPointer, "null argument");
        }
        *out = (*lattice).0.num_qubits();
        FqStatus::Ok
    })
}

/// Code parameters of a lattice.
///
/// # Safety
/// `lattice` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fq_code_params(lattice: *const FqLattice, out: *mut FqParams) -> FqStatus {
    guard(|| {
        if lattice.is_null() || out.is_null() {
            return fail(FqStatus::NullPointer, "null argument");
        }
        match report_parameters(&(*lattice).0) {
            Ok(p) => {
                *out = FqParams {
                    n: p.n,
                    k: p.k,
                    d: p.d,
                    genus: p.g,
                    rate: p.rate,
                };
                FqStatus::Ok
            }
            Err(e) => fail(FqStatus::InvalidLattice, e),
        }
    })
}

/// Builds the detector model of `lattice` over `rounds` noisy rounds at
/// physical error rate `p`; `rounds = 0` selects three rounds per unit of
/// distance.
///
/// # Safety
/// `lattice` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fq_simulator_new(
    lattice: *const FqLattice,
    rounds: usize,
    p: f64,
    out: *mut *mut FqSimulator,
) -> FqStatus {
    guard(|| {
        if lattice.is_null() || out.is_null() {
            return fail(FqStatus::NullPointer, "null argument");
        }
        if !(0.0..=0.5).contains(&p) {
            return fail(
                FqStatus::InvalidArgument,
                format!("error rate {p} outside [0, 0.5]"),
            );
        }
        let l = &(*lattice).0;
        let basis = match cocycle_basis(l) {
            Ok(b) => b,
            Err(e) => return fail(FqStatus::InvalidLattice, e),
        };
        let rounds = if rounds == 0 {
            match report_parameters(l) {
                Ok(params) => 3 * params.d,
                Err(e) => return fail(FqStatus::InvalidLattice, e),
            }
        } else {
            rounds
        };
        match build_detector_model(l, &basis, rounds, p) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(FqSimulator(m)));
                FqStatus::Ok
            }
            Err(e) => fail(FqStatus::Simulation, e),
        }
    })
}

/// Releases a simulator; null is ignored.
///
/// # Safety
/// `sim` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fq_simulator_free(sim: *mut FqSimulator) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Number of detectors of the model.
///
/// # Safety
/// `sim` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fq_simulator_num_detectors(
    sim: *const FqSimulator,
    out: *mut usize,
) -> FqStatus {
    guard(|| {
        if sim.is_null() || out.is_null() {
            return fail(FqStatus::NullPointer, "null argument");
        }
        *out = (*sim).0.num_detectors();
        FqStatus::Ok
    })
}

/// Samples and decodes `shots` shots with the default decoder; the counts
/// depend only on the model and `seed`.
///
/// # Safety
/// `sim` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fq_simulator_run(
    sim: *const FqSimulator,
    shots: u64,
    seed: u64,
    out: *mut FqCounts,
) -> FqStatus {
    guard(|| {
        if sim.is_null() || out.is_null() {
            return fail(FqStatus::NullPointer, "null argument");
        }
        if shots == 0 {
            return fail(FqStatus::InvalidArgument, "need at least one shot");
        }
        let model = &(*sim).0;
        let result = Decoder::new(model, DecoderConfig::default())
            .and_then(|d| sample_and_decode(&d, shots, seed));
        match result {
            Ok(c) => {
                *out = FqCounts {
                    shots: c.shots,
                    fails_any: c.fails_any,
                    fails_one: c.fails_one,
                };
                FqStatus::Ok
            }
            Err(e) => fail(FqStatus::Simulation, e),
        }
    })
}

/// Copies the last error message of this thread into `buf` as a
/// NUL-terminated string, truncating to `len - 1` bytes. Returns the full
/// message length, so a call with `len = 0` sizes the buffer.
///
/// # Safety
/// `buf` must be writable for `len` bytes, or null with `len = 0`.
#[no_mangle]
pub unsafe extern "C" fn fq_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = e.len().min(len - 1);
            ptr::copy_nonoverlapping(e.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        e.len()
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn fq_status_str(status: FqStatus) -> *const c_char {
    let s: &'static CStr = match status {
        FqStatus::Ok => c"ok",
        FqStatus::NullPointer => c"null pointer",
        FqStatus::InvalidArgument => c"invalid argument",
        FqStatus::Io => c"io error",
        FqStatus::Parse => c"parse error",
        FqStatus::InvalidLattice => c"invalid lattice",
        FqStatus::Simulation => c"simulation error",
        FqStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}
