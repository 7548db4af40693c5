//! The library is generic over the scalar; spot-check the `f32` build on the
//! same fixtures the `f64` tests use.

use dfakit::dfa::{decoherence_free_algebra, inclusion_report};
use dfakit::random::{random_channel, ChannelKind};
use dfakit::{ComplexMatrix32, KrausChannel32, RankPolicy, C32};

fn projector(i: usize) -> ComplexMatrix32 {
    let mut p = ComplexMatrix32::zeros(2, 2);
    p[(i, i)] = C32::new(1.0, 0.0);
    p
}

#[test]
fn dephasing_chain_in_single_precision() {
    let ch = KrausChannel32::new(vec![projector(0), projector(1)]).unwrap();
    let r = inclusion_report(&ch, RankPolicy::default(), 1e-4).unwrap();
    assert_eq!((r.dim_a_comm, r.dim_fixed, r.dim_dfa, r.dim_b_comm), (2, 2, 2, 2));
    assert!(r.chain_ok);
    assert_eq!(r.luders_ok, Some(true));
    assert!(r.oracle_distance < 1e-4);
}

#[test]
fn random_channels_in_single_precision() {
    for kind in ChannelKind::ALL {
        let ch = random_channel::<f32>(kind, 3, 2, 11).unwrap();
        assert!(ch.validate(1e-4).is_valid(), "{kind}");
        let r = inclusion_report(&ch, RankPolicy::default(), 1e-3).unwrap();
        assert!(r.chain_ok, "{kind}");
        assert!(r.oracle_distance < 1e-3, "{kind}: {}", r.oracle_distance);
        let reduced = ch.reduce_kraus(RankPolicy::default()).reduced;
        assert_eq!(decoherence_free_algebra(&reduced, RankPolicy::default()).dim(), r.dim_dfa);
    }
}
