//! C interface to `metric-spread`.
//!
//! Spaces are opaque `MsSpace` handles created by one of the
//! `ms_space_from_*` constructors and released with `ms_space_free`. Every
//! other function returns an `MsStatus` and writes its result through an out
//! pointer. On failure `ms_last_error_message` describes the error for the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use metric_spread::continuum::{
    interval_magnitude, interval_spread0, interval_spread2, interval_spread_inf,
    riemannian_asymptotic_spread, sphere_spread0, surface_asymptotic_spread, ManifoldSummary,
};
use metric_spread::descriptor::{Space, SpaceDescriptor};
use metric_spread::dimension::{dimension_profile, spread_dimension};
use metric_spread::diversity::Order;
use metric_spread::magnitude::{
    magnitude, magnitude_profile, maximum_diversity, maximum_diversity_profile,
};
use metric_spread::metric::{DistanceMatrix, MetricSpace, PointCloud};
use metric_spread::spread::{spread_profile, spread_q, Profile};
use metric_spread::Error;

/// Opaque handle to a finite metric space.
pub struct MsSpace(Space);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    NoWeighting = 3,
    Unsupported = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MsQuantity {
    Spread = 0,
    Magnitude = 1,
    MaximumDiversity = 2,
    Dimension = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> MsStatus {
    match err {
        Error::NoWeighting { .. } => MsStatus::NoWeighting,
        Error::UnsupportedSize { .. } | Error::UnsupportedWeightedOrder(_) => MsStatus::Unsupported,
        _ => MsStatus::InvalidInput,
    }
}

/// Runs `f`, recording errors and converting panics to `MsStatus::Panic`.
fn guard(f: impl FnOnce() -> Result<(), (MsStatus, String)>) -> MsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            MsStatus::Panic
        }
    }
}

fn lib<T>(r: metric_spread::Result<T>) -> Result<T, (MsStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (MsStatus, String) {
    (MsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn space_ref<'a>(space: *const MsSpace) -> Result<&'a Space, (MsStatus, String)> {
    space.as_ref().map(|s| &s.0).ok_or_else(|| null("space"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (MsStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn slice<'a, T>(
    data: *const T,
    len: usize,
    what: &str,
) -> Result<&'a [T], (MsStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn emit_space(space: Space, out: *mut *mut MsSpace) -> Result<(), (MsStatus, String)> {
    write_out(out, Box::into_raw(Box::new(MsSpace(space))))
}

/// Message for the last failed call on this thread, or null. The string is
/// owned by the library and valid until the next failing call on the thread.
#[no_mangle]
pub extern "C" fn ms_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a space from a row-major `n x n` distance matrix.
///
/// # Safety
/// `distances` must point to `n * n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_space_from_matrix(
    distances: *const f64,
    n: usize,
    out: *mut *mut MsSpace,
) -> MsStatus {
    guard(|| {
        let len = n
            .checked_mul(n)
            .ok_or_else(|| (MsStatus::InvalidInput, "n overflows".into()))?;
        let d = slice(distances, len, "distances")?;
        emit_space(Space::Matrix(lib(DistanceMatrix::new(n, d.to_vec()))?), out)
    })
}

/// Builds a Euclidean point cloud from `n` row-major points of dimension `dim`.
///
/// # Safety
/// `coords` must point to `n * dim` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_space_from_points(
    coords: *const f64,
    n: usize,
    dim: usize,
    out: *mut *mut MsSpace,
) -> MsStatus {
    guard(|| {
        let len = n
            .checked_mul(dim)
            .ok_or_else(|| (MsStatus::InvalidInput, "size overflows".into()))?;
        let c = slice(coords, len, "coords")?;
        if n == 0 || dim == 0 {
            return Err((
                MsStatus::InvalidInput,
                "need at least one point and one coordinate".into(),
            ));
        }
        emit_space(Space::Points(lib(PointCloud::new(dim, c.to_vec()))?), out)
    })
}

/// Builds a space from a JSON descriptor such as
/// `{"generator":"cantor","params":{"depth":10}}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_space_from_descriptor(
    json: *const c_char,
    out: *mut *mut MsSpace,
) -> MsStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|_| {
            (
                MsStatus::InvalidInput,
                "descriptor is not UTF-8".to_string(),
            )
        })?;
        let space = lib(SpaceDescriptor::from_json(text).and_then(|d| d.build(None)))?;
        emit_space(space, out)
    })
}

/// Releases a space. Null is ignored.
///
/// # Safety
/// `space` must come from an `ms_space_from_*` constructor and not be freed
/// twice.
#[no_mangle]
pub unsafe extern "C" fn ms_space_free(space: *mut MsSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// # Safety
/// `space` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_space_len(space: *const MsSpace, out: *mut usize) -> MsStatus {
    guard(|| write_out(out, space_ref(space)?.len()))
}

/// `E_q(tX)`; pass `INFINITY` for `q = inf`.
///
/// # Safety
/// `space` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_spread(
    space: *const MsSpace,
    t: f64,
    q: f64,
    out: *mut f64,
) -> MsStatus {
    guard(|| {
        let s = space_ref(space)?;
        let q = lib(Order::new(q))?;
        write_out(out, lib(spread_q(s, t, q))?.value)
    })
}

/// `|tX|`; returns `MS_STATUS_NO_WEIGHTING` when the similarity matrix is
/// singular.
///
/// # Safety
/// `space` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_magnitude(space: *const MsSpace, t: f64, out: *mut f64) -> MsStatus {
    guard(|| write_out(out, lib(magnitude(space_ref(space)?, t))?.value))
}

/// `|tX|_+` by exhaustive enumeration (at most 20 points).
///
/// # Safety
/// `space` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_maximum_diversity(
    space: *const MsSpace,
    t: f64,
    out: *mut f64,
) -> MsStatus {
    guard(|| write_out(out, lib(maximum_diversity(space_ref(space)?, t))?.value))
}

/// Spread dimension at scale `t` with relative log-step `delta`.
///
/// # Safety
/// `space` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_spread_dimension(
    space: *const MsSpace,
    t: f64,
    delta: f64,
    out: *mut f64,
) -> MsStatus {
    guard(|| {
        write_out(
            out,
            lib(spread_dimension(space_ref(space)?, t, delta))?.value,
        )
    })
}

/// Evaluates `quantity` at each of the `len` strictly increasing `scales`,
/// writing `len` values to `values` (`NaN` where undefined). `q` is the
/// order for spread profiles and the log-step for dimension profiles.
///
/// # Safety
/// `scales` must hold `len` readable doubles and `values` `len` writable ones.
#[no_mangle]
pub unsafe extern "C" fn ms_profile(
    space: *const MsSpace,
    quantity: MsQuantity,
    q: f64,
    scales: *const f64,
    len: usize,
    values: *mut f64,
) -> MsStatus {
    guard(|| {
        let s = space_ref(space)?;
        let grid = slice(scales, len, "scales")?;
        if values.is_null() {
            return Err(null("values"));
        }
        let profile: Profile = match quantity {
            MsQuantity::Spread => lib(spread_profile(s, grid, lib(Order::new(q))?))?,
            MsQuantity::Magnitude => lib(magnitude_profile(s, grid))?.profile,
            MsQuantity::MaximumDiversity => lib(maximum_diversity_profile(s, grid))?,
            MsQuantity::Dimension => lib(dimension_profile(s, grid, q))?,
        };
        let out = std::slice::from_raw_parts_mut(values, len);
        for (slot, v) in out.iter_mut().zip(&profile.values) {
            *slot = v.unwrap_or(f64::NAN);
        }
        Ok(())
    })
}

/// `E_0` of the interval of length `l`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_interval_spread0(l: f64, out: *mut f64) -> MsStatus {
    guard(|| write_out(out, lib(interval_spread0(l))?))
}

/// `E_2` of the interval of length `l`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_interval_spread2(l: f64, out: *mut f64) -> MsStatus {
    guard(|| write_out(out, lib(interval_spread2(l))?))
}

/// `E_inf` of the interval of length `l`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_interval_spread_inf(l: f64, out: *mut f64) -> MsStatus {
    guard(|| write_out(out, lib(interval_spread_inf(l))?))
}

/// Magnitude `l/2 + 1` of the interval of length `l`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_interval_magnitude(l: f64, out: *mut f64) -> MsStatus {
    guard(|| write_out(out, lib(interval_magnitude(l))?))
}

/// `E_0` of the round `n`-sphere of radius `r`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_sphere_spread0(n: usize, r: f64, out: *mut f64) -> MsStatus {
    guard(|| write_out(out, lib(sphere_spread0(n, r))?))
}

/// Two-term large-scale expansion of `E_0(tX)` for a closed `n`-manifold.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_riemannian_asymptotic_spread(
    n: usize,
    volume: f64,
    total_scalar_curvature: f64,
    t: f64,
    out: *mut f64,
) -> MsStatus {
    guard(|| {
        write_out(
            out,
            lib(ManifoldSummary::new(n, volume, total_scalar_curvature)
                .and_then(|m| riemannian_asymptotic_spread(&m, t)))?,
        )
    })
}

/// `area t^2 / (2 pi) + chi` for a closed surface.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ms_surface_asymptotic_spread(
    area: f64,
    euler_characteristic: f64,
    t: f64,
    out: *mut f64,
) -> MsStatus {
    guard(|| {
        write_out(
            out,
            lib(surface_asymptotic_spread(area, euler_characteristic, t))?,
        )
    })
}
