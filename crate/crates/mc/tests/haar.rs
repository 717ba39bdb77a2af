use loopeq_core::Execution;
use loopeq_mc::estimate::{mean_and_error, stream};
use loopeq_mc::haar::{sample_haar, unitarity_defect};
use loopeq_mc::Group;
use num_complex::Complex64;

fn traces(n: usize, group: Group, samples: u64) -> Vec<Complex64> {
    let ids: Vec<u64> = (0..samples).collect();
    Execution::Parallel.map(&ids, |&id| sample_haar(n, group, &mut stream(11, id)).trace())
}

#[test]
fn first_two_moments_of_the_trace() {
    for group in [Group::Unitary, Group::Orthogonal] {
        let t = traces(8, group, 4000);
        let re: Vec<f64> = t.iter().map(|z| z.re / 8.0).collect();
        let (mean, err) = mean_and_error(&re);
        assert!(mean.abs() <= 3.0 * err, "{group:?}: E tr U = {mean} ± {err}");
        // E |Tr U|^2 = 1 on U(N) and E (Tr O)^2 = 1 on O(N) for N >= 2
        let sq: Vec<f64> = t.iter().map(|z| z.norm_sqr()).collect();
        let (m2, e2) = mean_and_error(&sq);
        assert!((m2 - 1.0).abs() <= 3.0 * e2 + 0.02, "{group:?}: E|Tr U|^2 = {m2} ± {e2}");
    }
}

#[test]
fn entries_have_haar_moments() {
    // E |U_11|^2 = 1/N and E |U_11|^4 = 2 / (N (N + 1)) on U(N)
    let n = 6;
    let ids: Vec<u64> = (0..4000).collect();
    let x: Vec<f64> = Execution::Parallel.map(&ids, |&id| sample_haar(n, Group::Unitary, &mut stream(5, id))[(0, 0)].norm_sqr());
    let (m2, e2) = mean_and_error(&x);
    let (m4, e4) = mean_and_error(&x.iter().map(|v| v * v).collect::<Vec<_>>());
    assert!((m2 - 1.0 / n as f64).abs() <= 3.0 * e2, "{m2}");
    assert!((m4 - 2.0 / (n * (n + 1)) as f64).abs() <= 3.0 * e4, "{m4}");
}

#[test]
fn samples_are_unitary() {
    for group in [Group::Unitary, Group::Orthogonal] {
        for id in 0..20 {
            let u = sample_haar(16, group, &mut stream(3, id));
            assert!(unitarity_defect(&u) < 1e-12);
            if group == Group::Orthogonal {
                assert!(u.iter().all(|z| z.im == 0.0));
            }
        }
    }
}

#[test]
fn streams_are_reproducible() {
    let a = sample_haar(5, Group::Unitary, &mut stream(42, 7));
    let b = sample_haar(5, Group::Unitary, &mut stream(42, 7));
    let c = sample_haar(5, Group::Unitary, &mut stream(42, 8));
    assert_eq!(a, b);
    assert_ne!(a, c);
}
