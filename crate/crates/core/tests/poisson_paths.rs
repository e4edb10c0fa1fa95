use msrdme::builtins::isomerization;
use msrdme::poisson::{derive_registry, ChannelId, PoissonPath};

fn path(seed: u64, rep: u64, k: usize) -> PoissonPath {
    PoissonPath::new(seed, rep, ChannelId::Reaction { reaction: k % 7, voxel: k / 7 })
}

#[test]
fn no_arrivals_at_time_zero() {
    let mut p = path(1, 0, 0);
    assert_eq!(p.count_up_to(0.0).unwrap(), 0);
}

#[test]
fn replay_is_deterministic() {
    let mut p = path(9, 3, 4);
    let a = p.count_up_to(5.0).unwrap();
    assert_eq!(p.count_up_to(5.0).unwrap(), a);
    let mut q = path(9, 3, 4);
    assert_eq!(q.count_up_to(5.0).unwrap(), a);
    assert_eq!(p.arrivals(), q.arrivals());
}

#[test]
fn next_arrival_queries_agree_with_counts() {
    let mut p = path(2, 1, 5);
    let first = p.arrival(0);
    let mut fresh = path(2, 1, 5);
    assert_eq!(fresh.next_arrival_after(0.0).unwrap(), first);
    for t in [0.0, 0.3, 1.0, 2.5, 10.0] {
        let next = p.next_arrival_after(t).unwrap();
        assert!(next > t);
        assert_eq!(p.count_up_to(next).unwrap(), p.count_up_to(t).unwrap() + 1);
    }
}

#[test]
fn negative_times_are_rejected() {
    let mut p = path(0, 0, 0);
    assert!(p.count_up_to(-1.0).is_err());
    assert!(p.next_arrival_after(f64::NAN).is_err());
}

/// Mean and variance of `Π(3)` equal 3 for a unit-rate process.
#[test]
fn counts_have_poisson_moments() {
    let n = 20_000;
    let counts: Vec<f64> = (0..n)
        .map(|k| path(17, k as u64, 0).count_up_to(3.0).unwrap() as f64)
        .collect();
    let mean = counts.iter().sum::<f64>() / n as f64;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    assert!((mean - 3.0).abs() < 3.0 * (3.0 / n as f64).sqrt(), "mean {mean}");
    // Var of the sample variance of Poisson(3) is about (2·9 + 3)/n
    assert!((var - 3.0).abs() < 5.0 * (21.0 / n as f64).sqrt(), "var {var}");
}

/// `E|Π(T2) − Π(T1)| = T2 − T1` on a single path.
#[test]
fn increments_have_expected_size() {
    let n = 20_000;
    let (t1, t2) = (1.0, 2.5);
    let incs: Vec<f64> = (0..n)
        .map(|k| {
            let mut p = path(23, k as u64, 3);
            (p.count_up_to(t2).unwrap() - p.count_up_to(t1).unwrap()) as f64
        })
        .collect();
    let mean = incs.iter().sum::<f64>() / n as f64;
    assert!((mean - 1.5).abs() < 3.0 * (1.5 / n as f64).sqrt(), "mean {mean}");
}

#[test]
fn replicates_are_uncorrelated() {
    let n = 10_000;
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| (path(5, 2 * k, 1).arrival(0), path(5, 2 * k + 1, 1).arrival(0)))
        .collect();
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let sxy: f64 = pairs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pairs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let syy: f64 = pairs.iter().map(|p| (p.1 - my).powi(2)).sum();
    let r = sxy / (sxx * syy).sqrt();
    assert!(r.abs() < 4.0 / (n as f64).sqrt(), "correlation {r}");
    assert!(pairs.iter().all(|p| p.0 != p.1));
}

#[test]
fn channels_have_independent_streams() {
    let mut a = PoissonPath::new(1, 0, ChannelId::Reaction { reaction: 0, voxel: 0 });
    let mut b = PoissonPath::new(1, 0, ChannelId::Transport { species: 0, from: 0, to: 1 });
    let mut c = PoissonPath::new(1, 0, ChannelId::Transport { species: 0, from: 1, to: 0 });
    let (x, y, z) = (a.arrival(0), b.arrival(0), c.arrival(0));
    assert!(x != y && y != z && x != z);
}

#[test]
fn isomerization_registry_size() {
    let sc = isomerization(0.1).unwrap();
    let reg = derive_registry(0, 0, &sc.model, &sc.mesh);
    let reactions = reg
        .channels()
        .iter()
        .filter(|c| matches!(c, ChannelId::Reaction { .. }))
        .count();
    assert_eq!(reactions, 20);
    assert_eq!(reg.len() - reactions, 20);
}

#[test]
fn arrivals_do_not_depend_on_query_order() {
    let mut a = path(3, 7, 2);
    let late = a.arrival(50);
    let early = a.arrival(3);
    let mut b = path(3, 7, 2);
    assert_eq!(b.arrival(3), early);
    assert_eq!(b.arrival(50), late);
}
