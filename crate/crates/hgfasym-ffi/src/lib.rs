//! C interface to `hgfasym`.
//!
//! Values cross the boundary as opaque handles that keep their full
//! precision; callers read them back as doubles or as decimal strings.
//! Every function returns `HGFASYM_OK` (0) or a negative status: the library
//! error code negated, or one of the `HGFASYM_ERR_*` interface codes. The
//! message of the most recent failure on the calling thread is available
//! from [`hgfasym_last_error`].
//!
//! Null pointers are detected and reported. Any non-null pointer must come
//! from this library (handles) or point to memory of the stated size.

// The entry points are called from C, where `unsafe` carries no meaning; the
// pointer contract above is the safety condition for all of them.
#![allow(clippy::not_unsafe_ptr_arg_deref)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use rug::Rational;

use hgfasym::asym_ac::AsymCase;
use hgfasym::errorlab::{relative_error, AeMethod, Oracle};
use hgfasym::hgf::{hgf_eval, CutSide, HgfInput};
use hgfasym::lattice_gas::{partition_closed, partition_closed_exact, LatticeGasSystem};
use hgfasym::{BigComplex, Error, Precision};

pub const HGFASYM_OK: i32 = 0;
/// A required pointer argument was null.
pub const HGFASYM_ERR_NULL_POINTER: i32 = -100;
/// An argument could not be interpreted (bad UTF-8, zero denominator, unknown name).
pub const HGFASYM_ERR_INVALID_ARGUMENT: i32 = -101;
/// The output buffer cannot hold the string and its terminator.
pub const HGFASYM_ERR_BUFFER_TOO_SMALL: i32 = -102;
/// The library panicked; this is a bug.
pub const HGFASYM_ERR_PANIC: i32 = -103;

/// Side of the cut `[1, inf)` from which real `z >= 1` is approached.
pub const HGFASYM_SIDE_UPPER: i32 = 0;
pub const HGFASYM_SIDE_LOWER: i32 = 1;

/// An arbitrary-precision complex number.
pub struct HgfasymValue(BigComplex);

/// Parameters `(a0, b0, c0)`, rates and scale of `F(a0 + e1 l, b0 + e2 l; c0 + e3 l; z)`.
pub struct HgfasymCase {
    case: AsymCase,
    prec: Precision,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(-e.code(), e.to_string())
    }
}

fn invalid(msg: &str) -> Failure {
    Failure(HGFASYM_ERR_INVALID_ARGUMENT, msg.to_string())
}

/// Runs `body`, recording the message of any failure or panic.
fn guard<F: FnOnce() -> Result<(), Failure>>(body: F) -> i32 {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error(String::new());
            HGFASYM_OK
        }
        Ok(Err(Failure(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            HGFASYM_ERR_PANIC
        }
    }
}

fn precision(bits: u32) -> Result<Precision, Failure> {
    Ok(Precision::new(bits)?)
}

fn ratio(num: i64, den: i64) -> Result<Rational, Failure> {
    if den == 0 {
        return Err(invalid("zero denominator"));
    }
    Ok(Rational::from((num, den)))
}

fn text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(HGFASYM_ERR_NULL_POINTER, "null string".into()));
    }
    // SAFETY: non-null and, by contract, NUL-terminated.
    unsafe { CStr::from_ptr(s) }.to_str().map_err(|_| invalid("string is not UTF-8"))
}

fn borrow<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    // SAFETY: the pointer came from this library and has not been freed.
    unsafe { p.as_ref() }.ok_or_else(|| Failure(HGFASYM_ERR_NULL_POINTER, "null handle".into()))
}

fn store<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(HGFASYM_ERR_NULL_POINTER, "null output pointer".into()));
    }
    // SAFETY: checked non-null; the caller owns the slot.
    unsafe { *out = Box::into_raw(Box::new(value)) };
    Ok(())
}

/// Copies `s` with a terminating NUL; `len` is the buffer size in bytes.
fn write_str(s: &str, buf: *mut c_char, len: usize) -> Result<(), Failure> {
    if buf.is_null() {
        return Err(Failure(HGFASYM_ERR_NULL_POINTER, "null buffer".into()));
    }
    if s.len() + 1 > len {
        return Err(Failure(HGFASYM_ERR_BUFFER_TOO_SMALL, format!("need {} bytes", s.len() + 1)));
    }
    // SAFETY: the buffer holds at least `len` bytes by contract.
    unsafe {
        std::ptr::copy_nonoverlapping(s.as_ptr(), buf.cast::<u8>(), s.len());
        *buf.add(s.len()) = 0;
    }
    Ok(())
}

/// Copies the message of the last failure on this thread into `buf`.
///
/// The message is empty after a successful call.
#[no_mangle]
pub extern "C" fn hgfasym_last_error(buf: *mut c_char, len: usize) -> i32 {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    match write_str(&msg, buf, len) {
        Ok(()) => HGFASYM_OK,
        Err(Failure(code, _)) => code,
    }
}

/// A value from its real and imaginary parts, rounded to `bits`.
#[no_mangle]
pub extern "C" fn hgfasym_value_new(re: f64, im: f64, bits: u32, out: *mut *mut HgfasymValue) -> i32 {
    guard(|| {
        let p = precision(bits)?;
        store(out, HgfasymValue(BigComplex::from_f64(p.bits, re, im)))
    })
}

/// Releases a value; null is ignored.
#[no_mangle]
pub extern "C" fn hgfasym_value_free(value: *mut HgfasymValue) {
    if !value.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(value) });
    }
}

/// Real and imaginary parts rounded to double.
#[no_mangle]
pub extern "C" fn hgfasym_value_parts(value: *const HgfasymValue, re: *mut f64, im: *mut f64) -> i32 {
    guard(|| {
        let v = borrow(value)?;
        if re.is_null() || im.is_null() {
            return Err(Failure(HGFASYM_ERR_NULL_POINTER, "null output pointer".into()));
        }
        let (x, y) = v.0.to_f64_pair();
        // SAFETY: checked non-null.
        unsafe {
            *re = x;
            *im = y;
        }
        Ok(())
    })
}

/// `re,im` in decimal with `digits` significant digits (0 for the full precision).
#[no_mangle]
pub extern "C" fn hgfasym_value_to_string(
    value: *const HgfasymValue,
    digits: usize,
    buf: *mut c_char,
    len: usize,
) -> i32 {
    guard(|| {
        let v = &borrow(value)?.0;
        let digits =
            if digits == 0 { 1 + (v.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize } else { digits };
        let s = format!("{},{}", v.re().to_string_radix(10, Some(digits)), v.im().to_string_radix(10, Some(digits)));
        write_str(&s, buf, len)
    })
}

/// `F(a, b; c; z)`; `side` selects the limit onto the cut for real `z >= 1`.
#[no_mangle]
pub extern "C" fn hgfasym_hgf_eval(
    a: *const HgfasymValue,
    b: *const HgfasymValue,
    c: *const HgfasymValue,
    z: *const HgfasymValue,
    side: i32,
    bits: u32,
    out: *mut *mut HgfasymValue,
) -> i32 {
    guard(|| {
        let p = precision(bits)?;
        let side = match side {
            HGFASYM_SIDE_UPPER => CutSide::Upper,
            HGFASYM_SIDE_LOWER => CutSide::Lower,
            _ => return Err(invalid("side must be HGFASYM_SIDE_UPPER or HGFASYM_SIDE_LOWER")),
        };
        let input =
            HgfInput::new(borrow(a)?.0.clone(), borrow(b)?.0.clone(), borrow(c)?.0.clone(), borrow(z)?.0.clone())
                .with_side(side);
        let r = hgf_eval(&input, &p)?;
        store(out, HgfasymValue(r.value))
    })
}

/// A case with rates `e1 = e1_num/e1_den` and so on.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub extern "C" fn hgfasym_case_new(
    a0: *const HgfasymValue,
    b0: *const HgfasymValue,
    c0: *const HgfasymValue,
    e1_num: i64,
    e1_den: i64,
    e2_num: i64,
    e2_den: i64,
    e3_num: i64,
    e3_den: i64,
    lambda: *const HgfasymValue,
    bits: u32,
    out: *mut *mut HgfasymCase,
) -> i32 {
    guard(|| {
        let prec = precision(bits)?;
        let w = |v: *const HgfasymValue| borrow(v).map(|v| v.0.with_prec(prec.bits));
        let rates = (ratio(e1_num, e1_den)?, ratio(e2_num, e2_den)?, ratio(e3_num, e3_den)?);
        let case = AsymCase::new(w(a0)?, w(b0)?, w(c0)?, rates, w(lambda)?)?;
        store(out, HgfasymCase { case, prec })
    })
}

#[no_mangle]
pub extern "C" fn hgfasym_case_free(case: *mut HgfasymCase) {
    if !case.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(case) });
    }
}

/// The expansion `method` (for example `"ac-leading"` or `"ab-auto"`) at `z`.
#[no_mangle]
pub extern "C" fn hgfasym_ae_eval(
    case: *const HgfasymCase,
    method: *const c_char,
    z: *const HgfasymValue,
    out: *mut *mut HgfasymValue,
) -> i32 {
    guard(|| {
        let case = borrow(case)?;
        let m: AeMethod = text(method)?.parse().map_err(|e: Error| invalid(&e.to_string()))?;
        let z = borrow(z)?.0.with_prec(case.prec.bits);
        store(out, HgfasymValue(m.evaluate(&case.case, &z)?.value))
    })
}

/// Reference value of the case at `z`, approaching real `z >= 1` from below the cut.
#[no_mangle]
pub extern "C" fn hgfasym_case_reference(
    case: *const HgfasymCase,
    z: *const HgfasymValue,
    out: *mut *mut HgfasymValue,
) -> i32 {
    guard(|| {
        let case = borrow(case)?;
        let z = borrow(z)?.0.with_prec(case.prec.bits);
        store(out, HgfasymValue(Oracle::Series.evaluate(&case.case, &z, &case.prec)?))
    })
}

/// `100 |1 - approx/reference|`.
#[no_mangle]
pub extern "C" fn hgfasym_relative_error(
    approx: *const HgfasymValue,
    reference: *const HgfasymValue,
    out: *mut f64,
) -> i32 {
    guard(|| {
        let r = relative_error(&borrow(approx)?.0, &borrow(reference)?.0)?;
        if out.is_null() {
            return Err(Failure(HGFASYM_ERR_NULL_POINTER, "null output pointer".into()));
        }
        // SAFETY: checked non-null.
        unsafe { *out = r };
        Ok(())
    })
}

fn lattice(n: u64, t: u64, p: u64, zeta_num: i64, zeta_den: i64) -> Result<LatticeGasSystem, Failure> {
    Ok(LatticeGasSystem::with_zeta(n, t, p, ratio(zeta_num, zeta_den)?)?)
}

/// Partition function of `p` particles on `n` sites with `t` traps, by the closed form.
#[no_mangle]
pub extern "C" fn hgfasym_partition(
    n: u64,
    t: u64,
    p: u64,
    zeta_num: i64,
    zeta_den: i64,
    bits: u32,
    out: *mut *mut HgfasymValue,
) -> i32 {
    guard(|| {
        let prec = precision(bits)?;
        let sys = lattice(n, t, p, zeta_num, zeta_den)?;
        store(out, HgfasymValue(partition_closed(&sys, &prec)?))
    })
}

/// The same partition function as an exact fraction `num/den` written to `buf`.
#[no_mangle]
pub extern "C" fn hgfasym_partition_exact(
    n: u64,
    t: u64,
    p: u64,
    zeta_num: i64,
    zeta_den: i64,
    buf: *mut c_char,
    len: usize,
) -> i32 {
    guard(|| {
        let sys = lattice(n, t, p, zeta_num, zeta_den)?;
        let z = partition_closed_exact(&sys)?;
        let s = if *z.denom() == 1 { z.numer().to_string() } else { z.to_string() };
        write_str(&s, buf, len)
    })
}
