//! C ABI over the index-list arithmetic.
//!
//! Index lists cross the boundary as opaque `IrIndexList` handles. Integers
//! cross as NUL-terminated decimal (or `0x` hex on input) strings. Every
//! function returns an [`IrStatus`]; outputs are written through pointers
//! only on `IR_STATUS_OK`. Strings returned by this library must be released
//! with [`ir_string_free`], handles with [`ir_index_list_free`].

use std::ffi::{c_char, CStr, CString};
use std::panic::{self, AssertUnwindSafe};
use std::ptr;
use std::slice;

use indexradix::{
    add, deconstruct, multiply_indices, multiply_integers, parallel_multiply, parse_number_auto, Error,
    IndexList,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidIndexList = 4,
    IndexOverflow = 5,
    MaxCpuExceeded = 6,
    BufferTooSmall = 7,
    WorkerFailed = 8,
    Internal = 9,
}

/// Opaque handle to a canonical index list.
pub struct IrIndexList(IndexList);

fn status_of(err: &Error) -> IrStatus {
    match err {
        Error::Parse { .. } => IrStatus::Parse,
        Error::InvalidIndexList(_) => IrStatus::InvalidIndexList,
        Error::IndexOverflow(_) => IrStatus::IndexOverflow,
        Error::MaxCpuExceeded { .. } => IrStatus::MaxCpuExceeded,
        Error::Worker { .. } | Error::WorkerPanic(_) => IrStatus::WorkerFailed,
        _ => IrStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), IrStatus>) -> IrStatus {
    match panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IrStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => IrStatus::Internal,
    }
}

unsafe fn text<'a>(ptr: *const c_char) -> Result<&'a str, IrStatus> {
    if ptr.is_null() {
        return Err(IrStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| IrStatus::InvalidUtf8)
}

unsafe fn handle<'a>(ptr: *const IrIndexList) -> Result<&'a IndexList, IrStatus> {
    ptr.as_ref().map(|h| &h.0).ok_or(IrStatus::NullPointer)
}

unsafe fn put_handle(out: *mut *mut IrIndexList, list: IndexList) {
    *out = Box::into_raw(Box::new(IrIndexList(list)));
}

unsafe fn put_string(out: *mut *mut c_char, value: String) -> Result<(), IrStatus> {
    let c = CString::new(value).map_err(|_| IrStatus::Internal)?;
    *out = c.into_raw();
    Ok(())
}

/// Static description of a status code. Never NULL; do not free.
#[no_mangle]
pub extern "C" fn ir_status_message(status: IrStatus) -> *const c_char {
    let msg: &'static CStr = match status {
        IrStatus::Ok => c"ok",
        IrStatus::NullPointer => c"null pointer argument",
        IrStatus::InvalidUtf8 => c"string is not valid UTF-8",
        IrStatus::Parse => c"malformed number",
        IrStatus::InvalidIndexList => c"indices must be strictly decreasing",
        IrStatus::IndexOverflow => c"index exceeds the supported range",
        IrStatus::MaxCpuExceeded => c"more tasks required than max_cpu allows",
        IrStatus::BufferTooSmall => c"output buffer too small",
        IrStatus::WorkerFailed => c"a parallel task failed",
        IrStatus::Internal => c"internal error",
    };
    msg.as_ptr()
}

/// Parses a decimal or `0x` hex integer and stores its index list in `*out`.
///
/// # Safety
/// `number` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ir_index_list_from_string(number: *const c_char, out: *mut *mut IrIndexList) -> IrStatus {
    guard(|| {
        if out.is_null() {
            return Err(IrStatus::NullPointer);
        }
        let n = parse_number_auto(text(number)?).map_err(|e| status_of(&e))?;
        put_handle(out, deconstruct(&n));
        Ok(())
    })
}

/// Builds a handle from `len` strictly decreasing indices.
///
/// # Safety
/// `indices` must point to `len` readable values (may be NULL when `len` is 0).
#[no_mangle]
pub unsafe extern "C" fn ir_index_list_from_indices(
    indices: *const u64,
    len: usize,
    out: *mut *mut IrIndexList,
) -> IrStatus {
    guard(|| {
        if out.is_null() || (indices.is_null() && len > 0) {
            return Err(IrStatus::NullPointer);
        }
        let values = if len == 0 { &[][..] } else { slice::from_raw_parts(indices, len) };
        let list = IndexList::new(values.to_vec()).map_err(|e| status_of(&e))?;
        put_handle(out, list);
        Ok(())
    })
}

/// Number of indices (the popcount of the value). 0 for a NULL handle.
///
/// # Safety
/// `list` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ir_index_list_len(list: *const IrIndexList) -> usize {
    list.as_ref().map_or(0, |h| h.0.len())
}

/// Copies the indices, most significant first, into `buf`. `*written`
/// receives the list length even when `cap` is too small.
///
/// # Safety
/// `buf` must have room for `cap` values; `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ir_index_list_copy(
    list: *const IrIndexList,
    buf: *mut u64,
    cap: usize,
    written: *mut usize,
) -> IrStatus {
    guard(|| {
        let list = handle(list)?;
        if written.is_null() {
            return Err(IrStatus::NullPointer);
        }
        *written = list.len();
        if list.len() > cap {
            return Err(IrStatus::BufferTooSmall);
        }
        if list.is_empty() {
            return Ok(());
        }
        if buf.is_null() {
            return Err(IrStatus::NullPointer);
        }
        ptr::copy_nonoverlapping(list.as_slice().as_ptr(), buf, list.len());
        Ok(())
    })
}

/// # Safety
/// `list` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ir_index_list_free(list: *mut IrIndexList) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

/// Decimal value of a handle.
///
/// # Safety
/// `list` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ir_reconstruct(list: *const IrIndexList, out: *mut *mut c_char) -> IrStatus {
    guard(|| {
        let list = handle(list)?;
        if out.is_null() {
            return Err(IrStatus::NullPointer);
        }
        put_string(out, list.to_biguint().to_str_radix(10))
    })
}

/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ir_add(
    a: *const IrIndexList,
    b: *const IrIndexList,
    out: *mut *mut IrIndexList,
) -> IrStatus {
    guard(|| {
        let (a, b) = (handle(a)?, handle(b)?);
        if out.is_null() {
            return Err(IrStatus::NullPointer);
        }
        put_handle(out, add(a, b).map_err(|e| status_of(&e))?);
        Ok(())
    })
}

/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ir_multiply(
    a: *const IrIndexList,
    b: *const IrIndexList,
    out: *mut *mut IrIndexList,
) -> IrStatus {
    guard(|| {
        let (a, b) = (handle(a)?, handle(b)?);
        if out.is_null() {
            return Err(IrStatus::NullPointer);
        }
        put_handle(out, multiply_indices(a, b).map_err(|e| status_of(&e))?);
        Ok(())
    })
}

/// Product of two integer strings, as a decimal string.
///
/// # Safety
/// `a` and `b` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ir_multiply_strings(a: *const c_char, b: *const c_char, out: *mut *mut c_char) -> IrStatus {
    guard(|| {
        let a = parse_number_auto(text(a)?).map_err(|e| status_of(&e))?;
        let b = parse_number_auto(text(b)?).map_err(|e| status_of(&e))?;
        if out.is_null() {
            return Err(IrStatus::NullPointer);
        }
        let product = multiply_integers(&a, &b).map_err(|e| status_of(&e))?;
        put_string(out, product.to_str_radix(10))
    })
}

/// Partitioned parallel product of two integer strings, as a decimal
/// string. Fails with `IR_STATUS_MAX_CPU_EXCEEDED` when the partitioning
/// needs more than `max_cpu` tasks.
///
/// # Safety
/// `a` and `b` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ir_parallel_multiply(
    a: *const c_char,
    b: *const c_char,
    partitions_a: usize,
    partitions_b: usize,
    max_cpu: usize,
    out: *mut *mut c_char,
) -> IrStatus {
    guard(|| {
        let a = parse_number_auto(text(a)?).map_err(|e| status_of(&e))?;
        let b = parse_number_auto(text(b)?).map_err(|e| status_of(&e))?;
        if out.is_null() {
            return Err(IrStatus::NullPointer);
        }
        let product = parallel_multiply(&a, &b, partitions_a, partitions_b, max_cpu).map_err(|e| status_of(&e))?;
        put_string(out, product.to_str_radix(10))
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ir_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
