use crate::error::Result;
use crate::report::{SamplePoint, VerificationReport};
use crate::sampling::Sampler;

/// Redraws allowed per sample when evaluation hits a pole or domain error.
pub const MAX_REDRAWS: usize = 16;

/// Evaluate `eval` at `n` points drawn by `draw` from a generator seeded with
/// `seed`. A sample whose evaluation fails is redrawn up to [`MAX_REDRAWS`]
/// times; after that the failure is recorded as an infinite residual.
pub fn sweep<S, D, E>(name: &str, seed: u64, n: usize, tol: f64, mut draw: D, eval: E) -> VerificationReport
where
    D: FnMut(&mut Sampler) -> S,
    E: Fn(&S) -> Result<(SamplePoint, f64)>,
{
    let mut rng = Sampler::new(seed);
    let mut points = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    let mut notes = Vec::new();
    let mut redraws = 0usize;
    for index in 0..n {
        let mut last_err = None;
        let mut done = false;
        for _ in 0..=MAX_REDRAWS {
            let sample = draw(&mut rng);
            match eval(&sample) {
                Ok((point, residual)) => {
                    points.push(point);
                    residuals.push(residual);
                    done = true;
                    break;
                }
                Err(e) => {
                    redraws += 1;
                    last_err = Some(e);
                }
            }
        }
        if !done {
            points.push(SamplePoint::default());
            residuals.push(f64::INFINITY);
            if let Some(e) = last_err {
                notes.push(format!("sample {index} failed after {MAX_REDRAWS} redraws: {e}"));
            }
        }
    }
    let mut report = VerificationReport::new(name, Some(seed), points, residuals, tol);
    if redraws > 0 {
        report.notes.push(format!("{redraws} sample(s) redrawn after evaluation errors"));
    }
    report.notes.extend(notes);
    report
}
