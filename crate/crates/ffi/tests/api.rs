//! Exercises the C ABI through its Rust signatures.

use std::ffi::{c_char, CStr};
use std::ptr;

use refinv_ffi::*;

fn matrix(rows: usize, cols: usize, data: &[f64]) -> *mut RefinvMatrix {
    let mut out = ptr::null_mut();
    let status = unsafe { refinv_matrix_new(rows, cols, data.as_ptr(), &mut out) };
    assert_eq!(status, RefinvStatus::Ok);
    assert!(!out.is_null());
    out
}

fn contents(m: *const RefinvMatrix) -> (usize, usize, Vec<f64>) {
    let (mut rows, mut cols) = (0, 0);
    unsafe {
        assert_eq!(
            refinv_matrix_dims(m, &mut rows, &mut cols),
            RefinvStatus::Ok
        );
        let mut buf = vec![0.0; rows * cols];
        assert_eq!(
            refinv_matrix_copy_data(m, buf.as_mut_ptr(), buf.len()),
            RefinvStatus::Ok
        );
        (rows, cols, buf)
    }
}

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    let size = unsafe { refinv_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(size > 0, "an error message is recorded");
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_string_lossy()
        .into_owned()
}

/// `u'(t) + u(t) = 0` in two dimensions: `X(t) = exp(-t) I`.
fn unit_system() -> *mut RefinvSystem {
    let id = matrix(2, 2, &[1.0, 0.0, 0.0, 1.0]);
    let zero = matrix(2, 2, &[0.0; 4]);
    let mut sys = ptr::null_mut();
    let status = unsafe { refinv_system_new(id, zero, id, zero, &mut sys) };
    assert_eq!(status, RefinvStatus::Ok);
    unsafe {
        refinv_matrix_free(id);
        refinv_matrix_free(zero);
    }
    sys
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(refinv_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn matrix_round_trip() {
    let m = matrix(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    assert_eq!(contents(m), (2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]));
    let mut small = [0.0; 2];
    let status = unsafe { refinv_matrix_copy_data(m, small.as_mut_ptr(), small.len()) };
    assert_eq!(status, RefinvStatus::BufferTooSmall);
    assert!(last_error().contains("6 needed"));
    unsafe { refinv_matrix_free(m) };
}

#[test]
fn null_and_invalid_arguments_are_reported() {
    let mut out = ptr::null_mut();
    let status = unsafe { refinv_matrix_new(2, 2, ptr::null(), &mut out) };
    assert_eq!(status, RefinvStatus::NullPointer);
    assert_eq!(last_error(), "data is null");
    assert!(out.is_null());

    let status = unsafe { refinv_matrix_new(1, 1, [f64::NAN].as_ptr(), &mut out) };
    assert_eq!(status, RefinvStatus::InvalidArgument);

    let (mut r, mut c) = (0, 0);
    let status = unsafe { refinv_matrix_dims(ptr::null(), &mut r, &mut c) };
    assert_eq!(status, RefinvStatus::NullPointer);

    // a successful call clears the message
    let m = matrix(1, 1, &[1.0]);
    assert_eq!(unsafe { refinv_last_error_message(ptr::null_mut(), 0) }, 0);
    unsafe {
        refinv_matrix_free(m);
        refinv_matrix_free(ptr::null_mut());
        refinv_system_free(ptr::null_mut());
        refinv_closure_free(ptr::null_mut());
    }
}

#[test]
fn error_message_truncates_to_buffer() {
    let mut out = ptr::null_mut();
    unsafe { refinv_matrix_new(1, 1, ptr::null(), &mut out) };
    let mut buf = [0 as c_char; 5];
    let size = unsafe { refinv_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert_eq!(size, "data is null".len() + 1);
    assert_eq!(
        unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap(),
        "data"
    );
}

#[test]
fn fundamental_matrix_of_unit_system() {
    let sys = unit_system();
    let mut n = 0;
    assert_eq!(unsafe { refinv_system_dim(sys, &mut n) }, RefinvStatus::Ok);
    assert_eq!(n, 2);
    let t = 0.7;
    let mut x = ptr::null_mut();
    let mut dx = ptr::null_mut();
    let mut y = ptr::null_mut();
    let mut e = ptr::null_mut();
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(refinv_fundamental_matrix(sys, t, &mut x), RefinvStatus::Ok);
        assert_eq!(
            refinv_fundamental_derivative(sys, t, &mut dx),
            RefinvStatus::Ok
        );
        assert_eq!(refinv_riccati_y(sys, t, &mut y), RefinvStatus::Ok);
        assert_eq!(refinv_system_e(sys, &mut e), RefinvStatus::Ok);
        assert_eq!(refinv_system_m_plus(sys, &mut m), RefinvStatus::Ok);
    }
    let d = (-t).exp();
    let close =
        |got: Vec<f64>, want: [f64; 4]| got.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-13);
    assert!(close(contents(x).2, [d, 0.0, 0.0, d]));
    assert!(close(contents(dx).2, [-d, 0.0, 0.0, -d]));
    assert!(close(contents(y).2, [-1.0, 0.0, 0.0, -1.0]));
    assert!(close(contents(e).2, [1.0, 0.0, 0.0, 1.0]));
    assert!(close(contents(m).2, [1.0, 0.0, 0.0, 1.0]));
    unsafe {
        for h in [x, dx, y, e, m] {
            refinv_matrix_free(h);
        }
        refinv_system_free(sys);
    }
}

#[test]
fn singular_system_is_rejected() {
    // F = G makes F - G singular
    let id = matrix(1, 1, &[1.0]);
    let mut sys = ptr::null_mut();
    let status = unsafe { refinv_system_new(id, id, id, id, &mut sys) };
    assert_eq!(status, RefinvStatus::Singular);
    assert!(sys.is_null());
    assert!(!last_error().is_empty());

    let wide = matrix(1, 2, &[1.0, 2.0]);
    let status = unsafe { refinv_system_new(id, id, wide, id, &mut sys) };
    assert_eq!(status, RefinvStatus::DimensionMismatch);
    unsafe {
        refinv_matrix_free(id);
        refinv_matrix_free(wide);
    }
}

#[test]
fn z_value_matches_trace_forms() {
    let x = matrix(2, 2, &[1.0, 2.0, 3.0, 4.0]);
    let y = matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let xs = [x as *const RefinvMatrix, y as *const RefinvMatrix];
    let mut z = 0.0;
    unsafe {
        assert_eq!(
            refinv_z_value([1, 1].as_ptr(), xs.as_ptr(), 2, &mut z),
            RefinvStatus::Ok
        );
        // Tr X Tr Y - Tr XY
        assert!((z + 5.0).abs() < 1e-12);
        assert_eq!(
            refinv_z_value([2].as_ptr(), xs.as_ptr(), 1, &mut z),
            RefinvStatus::Ok
        );
        assert!((z + 2.0).abs() < 1e-12);
        assert_eq!(
            refinv_z_value([3, 0].as_ptr(), xs.as_ptr(), 2, &mut z),
            RefinvStatus::Ok
        );
        assert_eq!(z, 0.0);
        assert_eq!(
            refinv_z_value([1].as_ptr(), xs.as_ptr(), 0, &mut z),
            RefinvStatus::InvalidArgument
        );
        let mixed = [x as *const RefinvMatrix, ptr::null()];
        assert_eq!(
            refinv_z_value([1, 1].as_ptr(), mixed.as_ptr(), 2, &mut z),
            RefinvStatus::NullPointer
        );
        assert_eq!(last_error(), "xs[1] is null");
        refinv_matrix_free(x);
        refinv_matrix_free(y);
    }
}

#[test]
fn closure_report_for_two_by_two() {
    let mut report = ptr::null_mut();
    assert_eq!(
        unsafe { refinv_closure_explore(2, 6, &mut report) },
        RefinvStatus::Ok
    );
    let (mut closed, mut states) = (false, 0);
    unsafe {
        assert_eq!(
            refinv_closure_summary(report, &mut closed, &mut states),
            RefinvStatus::Ok
        );
    }
    assert!(closed);
    assert_eq!(states, 2);

    let mut needed = 0;
    let status = unsafe { refinv_closure_to_json(report, ptr::null_mut(), 0, &mut needed) };
    assert_eq!(status, RefinvStatus::BufferTooSmall);
    let mut buf = vec![0 as c_char; needed];
    let status =
        unsafe { refinv_closure_to_json(report, buf.as_mut_ptr(), buf.len(), &mut needed) };
    assert_eq!(status, RefinvStatus::Ok);
    let json = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap();
    assert!(json.contains("\"closed\":true"));
    assert!(json.contains("det(X')"));

    let sys = unit_system();
    let ts = [0.0, 0.25, 0.5];
    let mut worst = f64::NAN;
    let status =
        unsafe { refinv_closure_verify(report, sys, ts.as_ptr(), ts.len(), 5e-3, &mut worst) };
    assert_eq!(status, RefinvStatus::Ok);
    assert!(worst < 1e-6);
    unsafe {
        refinv_closure_free(report);
        refinv_system_free(sys);
    }
}

#[test]
fn open_closure_cannot_be_verified() {
    let mut report = ptr::null_mut();
    assert_eq!(
        unsafe { refinv_closure_explore(3, 2, &mut report) },
        RefinvStatus::Ok
    );
    let sys = unit_system();
    let mut worst = 0.0;
    let status = unsafe { refinv_closure_verify(report, sys, [0.0].as_ptr(), 1, 1e-3, &mut worst) };
    assert_eq!(status, RefinvStatus::NotClosed);
    assert_eq!(
        unsafe { refinv_closure_explore(0, 2, &mut report) },
        RefinvStatus::InvalidArgument
    );
    unsafe {
        refinv_closure_free(report);
        refinv_system_free(sys);
    }
}
