//! C ABI for the sinelab library.
//!
//! Conventions: every fallible function returns an [`SlbStatus`] and writes
//! its results through out-pointers; handles are opaque and must be released
//! with their matching `_free` function; on failure a thread-local message is
//! available via [`slb_last_error_message`] until the next failing call on
//! the same thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use sinelab::counting::{chain_on_interval, dpp_count_law, tv_integer, w1_integer, IntegerLaw};
use sinelab::experiments::{rate_sweep, RateReport, SweepConfig};
use sinelab::haar::{bulk_rescale, eigenangles, mc_count_law, sample_element};
use sinelab::kernels::{EnsembleId, KernelSpec, Scaling};
use sinelab::series::{bernoulli_growth_ratio, CoeffKind, CoeffTable};
use sinelab::Error;

/// Result codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlbStatus {
    Ok = 0,
    /// A parameter was malformed (bad enum value, empty list, bad interval).
    InvalidArgument = 1,
    /// Parameters were well-formed but outside a kernel's domain.
    DomainError = 2,
    /// The computation could not meet its numerical contract.
    NumericalError = 3,
    /// A required pointer was null.
    NullPointer = 4,
    /// An internal invariant failed; the library state is still valid.
    Panic = 5,
}

/// Ensemble selectors accepted wherever a function takes an `ensemble` int.
pub const SLB_ENSEMBLE_U: i32 = 0;
pub const SLB_ENSEMBLE_SO_EVEN: i32 = 1;
pub const SLB_ENSEMBLE_SO_ODD: i32 = 2;
pub const SLB_ENSEMBLE_SO_MINUS_ODD: i32 = 3;
pub const SLB_ENSEMBLE_SO_MINUS_EVEN: i32 = 4;
pub const SLB_ENSEMBLE_SP: i32 = 5;
pub const SLB_ENSEMBLE_SINE: i32 = 6;

/// Scaling selectors for [`slb_kernel_new`].
pub const SLB_SCALING_RAW: i32 = 0;
pub const SLB_SCALING_BULK: i32 = 1;

/// Coefficient-table selectors for [`slb_coeff_float`].
pub const SLB_COEFF_CSC: i32 = 0;
pub const SLB_COEFF_COT: i32 = 1;
pub const SLB_COEFF_TAN: i32 = 2;
pub const SLB_COEFF_BERNOULLI: i32 = 3;

/// Opaque kernel handle (ensemble, size parameter, scaling).
pub struct SlbKernel {
    spec: KernelSpec,
}

/// Opaque integer-law handle (a PMF on 0..len).
pub struct SlbLaw {
    law: IntegerLaw,
}

/// Opaque handle holding the eigenangles of a batch of Haar samples.
pub struct SlbAngles {
    sample_count: usize,
    per_sample: usize,
    raw: Vec<f64>,
    rescaled: Vec<f64>,
}

/// Opaque rate-sweep report handle.
pub struct SlbReport {
    report: RateReport,
}

/// One sweep row, copied out of an [`SlbReport`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SlbRateRow {
    pub n: u32,
    pub s: f64,
    pub w1: f64,
    pub dtv: f64,
    pub trace_norm: f64,
    pub bound_shape: f64,
    pub ratio: f64,
    /// NaN when the Monte Carlo cross-check was disabled.
    pub mc_tv: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

/// Message of the most recent failure on this thread, NUL-terminated. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn slb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

fn set_error(message: &str) {
    let clean = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(clean).expect("NUL bytes removed above");
    });
}

enum FfiError {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for FfiError {
    fn from(e: Error) -> Self {
        FfiError::Lib(e)
    }
}

fn status_of(err: &FfiError) -> SlbStatus {
    match err {
        FfiError::Null(_) => SlbStatus::NullPointer,
        FfiError::Lib(e) => match e {
            Error::Config(_) | Error::GridMismatch { .. } => SlbStatus::InvalidArgument,
            Error::Domain(_) | Error::BulkDomain { .. } => SlbStatus::DomainError,
            _ => SlbStatus::NumericalError,
        },
    }
}

fn message_of(err: &FfiError) -> String {
    match err {
        FfiError::Null(name) => format!("null pointer passed for `{name}`"),
        FfiError::Lib(e) => e.to_string(),
    }
}

/// Run a closure inside the panic firewall and translate its outcome.
fn boundary(f: impl FnOnce() -> Result<(), FfiError>) -> SlbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SlbStatus::Ok,
        Ok(Err(e)) => {
            set_error(&message_of(&e));
            status_of(&e)
        }
        Err(panic) => {
            let detail = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("internal panic: {detail}"));
            SlbStatus::Panic
        }
    }
}

unsafe fn out_slot<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, FfiError> {
    p.as_mut().ok_or(FfiError::Null(name))
}

unsafe fn handle<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, FfiError> {
    p.as_ref().ok_or(FfiError::Null(name))
}

fn ensemble_from(raw: i32) -> Result<EnsembleId, FfiError> {
    match raw {
        SLB_ENSEMBLE_U => Ok(EnsembleId::U),
        SLB_ENSEMBLE_SO_EVEN => Ok(EnsembleId::SoEven),
        SLB_ENSEMBLE_SO_ODD => Ok(EnsembleId::SoOdd),
        SLB_ENSEMBLE_SO_MINUS_ODD => Ok(EnsembleId::SoMinusOdd),
        SLB_ENSEMBLE_SO_MINUS_EVEN => Ok(EnsembleId::SoMinusEven),
        SLB_ENSEMBLE_SP => Ok(EnsembleId::Sp),
        SLB_ENSEMBLE_SINE => Ok(EnsembleId::Sine),
        other => Err(FfiError::Lib(Error::Config(format!(
            "unknown ensemble selector {other}"
        )))),
    }
}

fn scaling_from(raw: i32) -> Result<Scaling, FfiError> {
    match raw {
        SLB_SCALING_RAW => Ok(Scaling::Raw),
        SLB_SCALING_BULK => Ok(Scaling::Bulk),
        other => Err(FfiError::Lib(Error::Config(format!(
            "unknown scaling selector {other}"
        )))),
    }
}

/// Create a kernel handle. `n` is the nontrivial-eigenangle count (ignored
/// for the sine ensemble).
#[no_mangle]
pub unsafe extern "C" fn slb_kernel_new(
    ensemble: i32,
    n: u32,
    scaling: i32,
    out: *mut *mut SlbKernel,
) -> SlbStatus {
    boundary(|| {
        let slot = out_slot(out, "out")?;
        let spec = KernelSpec::new(ensemble_from(ensemble)?, n, scaling_from(scaling)?)?;
        *slot = Box::into_raw(Box::new(SlbKernel { spec }));
        Ok(())
    })
}

/// Release a kernel handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn slb_kernel_free(kernel: *mut SlbKernel) {
    if !kernel.is_null() {
        drop(Box::from_raw(kernel));
    }
}

/// Evaluate the kernel at one point.
#[no_mangle]
pub unsafe extern "C" fn slb_kernel_eval(
    kernel: *const SlbKernel,
    x: f64,
    y: f64,
    out: *mut f64,
) -> SlbStatus {
    boundary(|| {
        let k = handle(kernel, "kernel")?;
        let slot = out_slot(out, "out")?;
        *slot = k.spec.eval(x, y)?;
        Ok(())
    })
}

/// Float view of entry `k` of a coefficient table (see the SLB_COEFF
/// selectors).
#[no_mangle]
pub unsafe extern "C" fn slb_coeff_float(kind: i32, k: u32, out: *mut f64) -> SlbStatus {
    boundary(|| {
        let slot = out_slot(out, "out")?;
        let kind = match kind {
            SLB_COEFF_CSC => CoeffKind::Csc,
            SLB_COEFF_COT => CoeffKind::CotCorrection,
            SLB_COEFF_TAN => CoeffKind::Tan,
            SLB_COEFF_BERNOULLI => CoeffKind::Bernoulli,
            other => {
                return Err(FfiError::Lib(Error::Config(format!(
                    "unknown coefficient selector {other}"
                ))))
            }
        };
        let mut table = CoeffTable::new(kind, k as usize);
        *slot = table.entry(k as usize).float;
        Ok(())
    })
}

/// Growth ratio of consecutive even-index Bernoulli magnitudes at index `n`.
#[no_mangle]
pub unsafe extern "C" fn slb_growth_ratio(n: u32, out: *mut f64) -> SlbStatus {
    boundary(|| {
        let slot = out_slot(out, "out")?;
        if n == 0 {
            return Err(FfiError::Lib(Error::Config("n must be at least 1".into())));
        }
        *slot = bernoulli_growth_ratio(n as usize);
        Ok(())
    })
}

/// Exact counting law of the kernel's point process restricted to
/// [lo, hi], via a Nystrom discretization with `grid_size` nodes.
#[no_mangle]
pub unsafe extern "C" fn slb_count_law(
    kernel: *const SlbKernel,
    lo: f64,
    hi: f64,
    grid_size: u32,
    out: *mut *mut SlbLaw,
) -> SlbStatus {
    boundary(|| {
        let k = handle(kernel, "kernel")?;
        let slot = out_slot(out, "out")?;
        let (law, _) = dpp_count_law(&k.spec, (lo, hi), grid_size as usize)?;
        *slot = Box::into_raw(Box::new(SlbLaw { law }));
        Ok(())
    })
}

/// Empirical counting law of bulk-rescaled eigenangles over `num_samples`
/// Haar draws. `n` is the nontrivial-eigenangle count.
#[no_mangle]
pub unsafe extern "C" fn slb_mc_count_law(
    ensemble: i32,
    n: u32,
    lo: f64,
    hi: f64,
    num_samples: u64,
    seed: u64,
    out: *mut *mut SlbLaw,
) -> SlbStatus {
    boundary(|| {
        let slot = out_slot(out, "out")?;
        let (law, _) = mc_count_law(
            ensemble_from(ensemble)?,
            n,
            (lo, hi),
            num_samples as usize,
            seed,
        )?;
        *slot = Box::into_raw(Box::new(SlbLaw { law }));
        Ok(())
    })
}

/// Support size of the law (its PMF has entries 0..len-1).
#[no_mangle]
pub unsafe extern "C" fn slb_law_len(law: *const SlbLaw, out: *mut usize) -> SlbStatus {
    boundary(|| {
        let l = handle(law, "law")?;
        *out_slot(out, "out")? = l.law.support_len();
        Ok(())
    })
}

/// Copy the PMF into `buf`; `buf_len` must be at least the support size.
#[no_mangle]
pub unsafe extern "C" fn slb_law_pmf(
    law: *const SlbLaw,
    buf: *mut f64,
    buf_len: usize,
) -> SlbStatus {
    boundary(|| {
        let l = handle(law, "law")?;
        if buf.is_null() {
            return Err(FfiError::Null("buf"));
        }
        let pmf = l.law.pmf();
        if buf_len < pmf.len() {
            return Err(FfiError::Lib(Error::Config(format!(
                "buffer of {buf_len} entries cannot hold a PMF of {}",
                pmf.len()
            ))));
        }
        std::ptr::copy_nonoverlapping(pmf.as_ptr(), buf, pmf.len());
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn slb_law_mean(law: *const SlbLaw, out: *mut f64) -> SlbStatus {
    boundary(|| {
        *out_slot(out, "out")? = handle(law, "law")?.law.mean();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn slb_law_variance(law: *const SlbLaw, out: *mut f64) -> SlbStatus {
    boundary(|| {
        *out_slot(out, "out")? = handle(law, "law")?.law.variance();
        Ok(())
    })
}

/// Wasserstein-1 distance between two integer laws.
#[no_mangle]
pub unsafe extern "C" fn slb_law_w1(
    a: *const SlbLaw,
    b: *const SlbLaw,
    out: *mut f64,
) -> SlbStatus {
    boundary(|| {
        *out_slot(out, "out")? = w1_integer(&handle(a, "a")?.law, &handle(b, "b")?.law);
        Ok(())
    })
}

/// Total-variation distance between two integer laws.
#[no_mangle]
pub unsafe extern "C" fn slb_law_tv(
    a: *const SlbLaw,
    b: *const SlbLaw,
    out: *mut f64,
) -> SlbStatus {
    boundary(|| {
        *out_slot(out, "out")? = tv_integer(&handle(a, "a")?.law, &handle(b, "b")?.law);
        Ok(())
    })
}

/// Release a law handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn slb_law_free(law: *mut SlbLaw) {
    if !law.is_null() {
        drop(Box::from_raw(law));
    }
}

/// Distances between the kernel's counting law and the sine one on
/// [lo, hi], plus the trace norm of the kernel difference there. Any of the
/// three out-pointers may be null to skip that figure.
#[no_mangle]
pub unsafe extern "C" fn slb_distance_to_sine(
    kernel: *const SlbKernel,
    lo: f64,
    hi: f64,
    grid_size: u32,
    out_dtv: *mut f64,
    out_w1: *mut f64,
    out_trace_norm: *mut f64,
) -> SlbStatus {
    boundary(|| {
        let k = handle(kernel, "kernel")?;
        let chain = chain_on_interval(&k.spec, (lo, hi), grid_size as usize)?;
        if let Some(slot) = out_dtv.as_mut() {
            *slot = chain.dtv;
        }
        if let Some(slot) = out_w1.as_mut() {
            *slot = chain.w1;
        }
        if let Some(slot) = out_trace_norm.as_mut() {
            *slot = chain.trace_norm;
        }
        Ok(())
    })
}

/// Draw `count` Haar samples and keep their nontrivial eigenangles, both as
/// raw angles and bulk-rescaled. `n` is the nontrivial-eigenangle count.
#[no_mangle]
pub unsafe extern "C" fn slb_sample_angles(
    ensemble: i32,
    n: u32,
    count: u64,
    seed: u64,
    out: *mut *mut SlbAngles,
) -> SlbStatus {
    boundary(|| {
        let slot = out_slot(out, "out")?;
        let ensemble = ensemble_from(ensemble)?;
        let mut raw = Vec::new();
        let mut rescaled = Vec::new();
        for index in 0..count {
            let g = sample_element(ensemble, n, seed, index)?;
            let sample = eigenangles(&g)?;
            raw.extend_from_slice(sample.angles());
            rescaled.extend(bulk_rescale(&sample));
        }
        *slot = Box::into_raw(Box::new(SlbAngles {
            sample_count: count as usize,
            per_sample: n as usize,
            raw,
            rescaled,
        }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn slb_angles_sample_count(
    angles: *const SlbAngles,
    out: *mut usize,
) -> SlbStatus {
    boundary(|| {
        *out_slot(out, "out")? = handle(angles, "angles")?.sample_count;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn slb_angles_per_sample(
    angles: *const SlbAngles,
    out: *mut usize,
) -> SlbStatus {
    boundary(|| {
        *out_slot(out, "out")? = handle(angles, "angles")?.per_sample;
        Ok(())
    })
}

/// Copy angles row-major (sample index major) into `buf`. Pass a nonzero
/// `rescaled` to copy the bulk-rescaled values instead of raw angles.
/// `buf_len` must be at least sample_count * per_sample.
#[no_mangle]
pub unsafe extern "C" fn slb_angles_copy(
    angles: *const SlbAngles,
    rescaled: i32,
    buf: *mut f64,
    buf_len: usize,
) -> SlbStatus {
    boundary(|| {
        let a = handle(angles, "angles")?;
        if buf.is_null() {
            return Err(FfiError::Null("buf"));
        }
        let source = if rescaled != 0 { &a.rescaled } else { &a.raw };
        if buf_len < source.len() {
            return Err(FfiError::Lib(Error::Config(format!(
                "buffer of {buf_len} entries cannot hold {} angles",
                source.len()
            ))));
        }
        std::ptr::copy_nonoverlapping(source.as_ptr(), buf, source.len());
        Ok(())
    })
}

/// Release an angle batch. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn slb_angles_free(angles: *mut SlbAngles) {
    if !angles.is_null() {
        drop(Box::from_raw(angles));
    }
}

/// Run a distance-to-sine rate sweep over the given eigenangle counts.
/// `mc_samples` of zero disables the Monte Carlo cross-check column.
#[no_mangle]
pub unsafe extern "C" fn slb_rate_sweep(
    ensemble: i32,
    n_values: *const u32,
    n_values_len: usize,
    s: f64,
    grid_size: u32,
    seed: u64,
    mc_samples: u64,
    out: *mut *mut SlbReport,
) -> SlbStatus {
    boundary(|| {
        let slot = out_slot(out, "out")?;
        if n_values.is_null() {
            return Err(FfiError::Null("n_values"));
        }
        let ns = std::slice::from_raw_parts(n_values, n_values_len).to_vec();
        let config = SweepConfig {
            ensemble: ensemble_from(ensemble)?,
            n_values: ns,
            s,
            grid_size: grid_size as usize,
            seed,
            mc_samples: mc_samples as usize,
        };
        let report = rate_sweep(&config)?;
        *slot = Box::into_raw(Box::new(SlbReport { report }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn slb_report_row_count(
    report: *const SlbReport,
    out: *mut usize,
) -> SlbStatus {
    boundary(|| {
        *out_slot(out, "out")? = handle(report, "report")?.report.rows.len();
        Ok(())
    })
}

/// Copy row `index` of the report.
#[no_mangle]
pub unsafe extern "C" fn slb_report_row(
    report: *const SlbReport,
    index: usize,
    out: *mut SlbRateRow,
) -> SlbStatus {
    boundary(|| {
        let r = handle(report, "report")?;
        let slot = out_slot(out, "out")?;
        let row = r.report.rows.get(index).ok_or_else(|| {
            FfiError::Lib(Error::Config(format!(
                "row index {index} out of range for a {}-row report",
                r.report.rows.len()
            )))
        })?;
        *slot = SlbRateRow {
            n: row.n,
            s: row.s,
            w1: row.w1,
            dtv: row.dtv,
            trace_norm: row.trace_norm,
            bound_shape: row.bound_shape,
            ratio: row.ratio,
            mc_tv: row.mc_tv.unwrap_or(f64::NAN),
        };
        Ok(())
    })
}

/// Fitted log-log slopes and their r-squared values. Any out-pointer may be
/// null to skip that figure.
#[no_mangle]
pub unsafe extern "C" fn slb_report_fit(
    report: *const SlbReport,
    out_slope_w1: *mut f64,
    out_slope_trace_norm: *mut f64,
    out_r_squared_w1: *mut f64,
    out_r_squared_trace_norm: *mut f64,
) -> SlbStatus {
    boundary(|| {
        let r = &handle(report, "report")?.report;
        if let Some(slot) = out_slope_w1.as_mut() {
            *slot = r.slope_w1;
        }
        if let Some(slot) = out_slope_trace_norm.as_mut() {
            *slot = r.slope_tnorm;
        }
        if let Some(slot) = out_r_squared_w1.as_mut() {
            *slot = r.r_squared_w1;
        }
        if let Some(slot) = out_r_squared_trace_norm.as_mut() {
            *slot = r.r_squared_tnorm;
        }
        Ok(())
    })
}

/// Release a report handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn slb_report_free(report: *mut SlbReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
