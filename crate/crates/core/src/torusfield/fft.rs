use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

/// Unnormalised multi-dimensional DFT over a row-major array (last axis
/// fastest), one axis at a time.
pub(crate) fn fft_nd(data: &mut [Complex64], shape: &[usize], direction: FftDirection) {
    let total: usize = shape.iter().product();
    debug_assert_eq!(total, data.len());
    let mut planner = FftPlanner::<f64>::new();
    let mut stride = 1;
    for axis in (0..shape.len()).rev() {
        let n = shape[axis];
        let fft = planner.plan_fft(n, direction);
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        let block = n * stride;
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (i, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + i * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (i, v) in line.iter().enumerate() {
                    data[base + i * stride] = *v;
                }
            }
        }
        stride *= n;
    }
}
