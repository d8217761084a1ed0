//! End-to-end exercise of the C ABI from Rust: build handles, solve the
//! constant-coefficient problem, read the report and the path, and check
//! the error paths.

use std::ffi::{CStr, CString};
use std::ptr;

use heteroclinic_ffi::*;

#[test]
fn solve_through_the_c_interface() {
    unsafe {
        let mut pot: *mut HetPotential = ptr::null_mut();
        assert_eq!(het_potential_quartic(0.1, &mut pot), HetStatus::HetOk);
        assert!(!pot.is_null());

        let name = CString::new("const(1)").unwrap();
        let mut coef: *mut HetCoefficient = ptr::null_mut();
        assert_eq!(
            het_coefficient_standard(name.as_ptr(), &mut coef),
            HetStatus::HetOk
        );

        let options = het_solve_options_default();
        assert_eq!(options.max_iters, 50_000);
        assert_eq!(options.tol_grad_dual, 1e-8);

        let mut result: *mut HetSolveResult = ptr::null_mut();
        assert_eq!(
            het_solve(pot, coef, 1.0, 12.0, 601, &options, &mut result),
            HetStatus::HetOk
        );

        let mut report = HetActionReport {
            value: 0.0,
            grad_dual: 0.0,
            grad_l2: 0.0,
            residual_inf: 0.0,
            tail_truncation_bound: 0.0,
            iterations: 0,
            converged: 0,
        };
        assert_eq!(het_result_report(result, &mut report), HetStatus::HetOk);
        assert_eq!(report.converged, 1);
        assert!(
            (report.value - 0.9428090415820634).abs() < 2e-3,
            "value = {}",
            report.value
        );
        assert!(report.grad_dual <= 1e-8);
        assert!(report.iterations > 0);

        let n = het_result_node_count(result) as usize;
        assert_eq!(n, 601);
        let mut times = vec![0.0; n];
        let mut values = vec![0.0; n];
        assert_eq!(
            het_result_copy_values(result, times.as_mut_ptr(), values.as_mut_ptr(), n as u64),
            HetStatus::HetOk
        );
        assert_eq!(values[0], -1.0);
        assert_eq!(values[n - 1], 1.0);
        assert_eq!(times[(n - 1) / 2], 0.0);
        // The middle of the orbit crosses zero for the symmetric problem.
        assert!(values[(n - 1) / 2].abs() < 1e-6);

        // Wrong buffer length is rejected, not overrun.
        assert_eq!(
            het_result_copy_values(result, times.as_mut_ptr(), values.as_mut_ptr(), 7),
            HetStatus::HetInvalidArgument
        );

        het_result_free(result);
        het_coefficient_free(coef);
        het_potential_free(pot);
    }
}

#[test]
fn error_paths_set_messages_and_statuses() {
    unsafe {
        // Null out-pointer.
        assert_eq!(
            het_potential_quartic(0.1, ptr::null_mut()),
            HetStatus::HetNullPointer
        );

        // Invalid collar width.
        let mut pot: *mut HetPotential = ptr::null_mut();
        assert_eq!(
            het_potential_quartic(-1.0, &mut pot),
            HetStatus::HetInvalidArgument
        );
        let msg = CStr::from_ptr(het_last_error_message());
        assert!(!msg.to_bytes().is_empty());

        // Unknown coefficient family.
        let bad = CString::new("mystery_family").unwrap();
        let mut coef: *mut HetCoefficient = ptr::null_mut();
        assert_eq!(
            het_coefficient_standard(bad.as_ptr(), &mut coef),
            HetStatus::HetInvalidArgument
        );

        // Even node count is rejected through the same status.
        assert_eq!(het_potential_quartic(0.1, &mut pot), HetStatus::HetOk);
        let name = CString::new("const(1)").unwrap();
        assert_eq!(
            het_coefficient_standard(name.as_ptr(), &mut coef),
            HetStatus::HetOk
        );
        let mut result: *mut HetSolveResult = ptr::null_mut();
        assert_eq!(
            het_solve(pot, coef, 1.0, 12.0, 600, ptr::null(), &mut result),
            HetStatus::HetInvalidArgument
        );
        assert!(result.is_null());

        // Frees tolerate null.
        het_result_free(ptr::null_mut());
        het_coefficient_free(ptr::null_mut());
        het_potential_free(ptr::null_mut());
    }
}
