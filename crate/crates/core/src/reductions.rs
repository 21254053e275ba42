//! Zero-round wrappers that turn matching and edge-colouring algorithms into
//! b-grabbing algorithms with the same radius.

use rand::seq::index;

use crate::baselines::private_word;
use crate::local::{labels_from_ports, AlgorithmDescriptor, AlgorithmKind, Label};
use crate::rng;

const TOP_UP_SALT: u64 = 0x746f_7075;
const FALLBACK_SALT: u64 = 0x6661_6c6c;

/// Grabbing from a b-matching algorithm: keep the claimed set `P_v`,
/// dropping the largest-index excess ports if it is too big, and top up
/// with uniformly random unclaimed ports drawn from the centre's private
/// randomness. Always produces exactly `b` grabs, so an erroneous matching
/// never turns into a grabbing error.
pub fn matching_to_grabbing(alg: &AlgorithmDescriptor) -> AlgorithmDescriptor {
    let AlgorithmKind::Matching { b } = alg.kind else {
        panic!("matching_to_grabbing needs a matching algorithm, got {:?}", alg.kind);
    };
    let inner = alg.clone();
    AlgorithmDescriptor::new(
        format!("grab({})", alg.name),
        alg.radius,
        AlgorithmKind::Grabbing { b },
        move |view| {
            let ports = view.ports();
            let labels = inner.evaluate(view);
            let mut grabbed: Vec<usize> = (0..ports).filter(|&p| labels[p].is_m()).collect();
            grabbed.truncate(b);
            if grabbed.len() < b {
                let rest: Vec<usize> = (0..ports).filter(|p| !grabbed.contains(p)).collect();
                let mut r = rng::stream(private_word(view.center(), TOP_UP_SALT), 0);
                let pick = index::sample(&mut r, rest.len(), b - grabbed.len());
                grabbed.extend(pick.iter().map(|i| rest[i]));
            }
            labels_from_ports(ports, grabbed)
        },
    )
}

/// Colour class chosen by the shared bits.
pub fn shared_color(shared_bits: u64, palette: usize) -> u32 {
    (shared_bits % palette as u64) as u32
}

/// 1-grabbing from an edge-colouring algorithm: every node reads the colour
/// class `chi` from the shared bits and grabs its lowest port coloured
/// `chi`, or a uniformly random port if it has none. Nodes sharing a
/// `chi`-edge grab it from both sides.
pub fn coloring_to_grabbing(alg: &AlgorithmDescriptor) -> AlgorithmDescriptor {
    let AlgorithmKind::EdgeColoring { palette } = alg.kind else {
        panic!("coloring_to_grabbing needs an edge colouring, got {:?}", alg.kind);
    };
    let inner = alg.clone();
    AlgorithmDescriptor::new(
        format!("grab({})", alg.name),
        alg.radius,
        AlgorithmKind::Grabbing { b: 1 },
        move |view| {
            let ports = view.ports();
            let chi = shared_color(view.shared.bits, palette);
            let colors = inner.evaluate(view);
            let port = colors
                .iter()
                .position(|&c| c == Label::Color(chi))
                .unwrap_or_else(|| (private_word(view.center(), FALLBACK_SALT) % ports as u64) as usize);
            labels_from_ports(ports, [port])
        },
    )
}
