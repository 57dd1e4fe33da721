//! The three reference systems and their canonical pairs of points.

use serde::{Deserialize, Serialize};

use crate::measure::{derive_seed, sample_point, MarkovMeasure};
use crate::rational::rat;
use crate::symbolic::{PointRep, Sft};

/// Depth within which every canonical pair differs.
pub const PAIR_DEPTH: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelPair {
    pub label: String,
    pub x: PointRep,
    pub y: PointRep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelSystem {
    pub id: String,
    pub description: String,
    pub measure: MarkovMeasure,
    pub pairs: Vec<PanelPair>,
}

impl PanelSystem {
    pub fn sft(&self) -> &Sft {
        self.measure.sft()
    }
}

/// Uniform Bernoulli measure on the full 2-shift.
pub fn bernoulli_measure() -> MarkovMeasure {
    MarkovMeasure::uniform_bernoulli(2).expect("full 2-shift")
}

/// The golden-mean shift (no `11`) with `P = [[1/2, 1/2], [1, 0]]`.
pub fn golden_mean_measure() -> MarkovMeasure {
    let sft = Sft::new(vec![vec![true, true], vec![true, false]]).expect("golden mean shift");
    MarkovMeasure::new(sft, vec![vec![rat(1, 2), rat(1, 2)], vec![rat(1, 1), rat(0, 1)]]).expect("golden mean measure")
}

/// The single orbit `0 -> 1 -> 2 -> 3 -> 0` with the uniform measure.
pub fn four_cycle_measure() -> MarkovMeasure {
    let allowed = (0..4).map(|a| (0..4).map(|b| b == (a + 1) % 4).collect()).collect();
    let sft = Sft::new(allowed).expect("4-cycle");
    let p = (0..4).map(|a| (0..4).map(|b| rat((b == (a + 1) % 4) as i64, 1)).collect()).collect();
    MarkovMeasure::new(sft, p).expect("4-cycle measure")
}

fn periodic(sft: &Sft, w: &[u8]) -> PointRep {
    PointRep::periodic(sft, w.to_vec()).expect("valid periodic point")
}

fn spike(sft: &Sft, background: u8, core: &[u8]) -> PointRep {
    PointRep::eventually_periodic(sft, vec![background], core.to_vec(), vec![background]).expect("valid point")
}

fn pair(label: &str, x: PointRep, y: PointRep) -> PanelPair {
    PanelPair { label: label.into(), x, y }
}

/// Two sampled points around the origin that differ within [`PAIR_DEPTH`].
fn sampled_pair(m: &MarkovMeasure, tag: u64) -> (PointRep, PointRep) {
    let d = PAIR_DEPTH as i64;
    let mut k = 0;
    loop {
        let x = sample_point(m, -16, 16, derive_seed(tag, &[k, 0])).unwrap();
        let y = sample_point(m, -16, 16, derive_seed(tag, &[k, 1])).unwrap();
        if x.block(-d, d).unwrap() != y.block(-d, d).unwrap() {
            return (x, y);
        }
        k += 1;
    }
}

fn sampled_with(m: &MarkovMeasure, tag: u64, other: &PointRep) -> PointRep {
    let d = PAIR_DEPTH as i64;
    (0..)
        .map(|k| sample_point(m, -16, 16, derive_seed(tag, &[k])).unwrap())
        .find(|x| x.block(-d, d).unwrap() != other.block(-d, d).unwrap())
        .unwrap()
}

pub fn bernoulli_system() -> PanelSystem {
    let m = bernoulli_measure();
    let s = m.sft().clone();
    let zeros = periodic(&s, &[0]);
    let (p, q) = sampled_pair(&m, 101);
    let r = sampled_with(&m, 102, &zeros);
    let pairs = vec![
        pair("zeros/ones", zeros.clone(), periodic(&s, &[1])),
        pair("zeros/alternating", zeros.clone(), periodic(&s, &[0, 1])),
        pair("alternating/shifted", periodic(&s, &[0, 1]), periodic(&s, &[1, 0])),
        pair("zeros/spike@2", zeros.clone(), spike(&s, 0, &[0, 0, 1])),
        pair("zeros/left-alternating", zeros.clone(), PointRep::eventually_periodic(&s, vec![0, 1], vec![0], vec![0]).unwrap()),
        pair("ones/period3", periodic(&s, &[1]), periodic(&s, &[0, 0, 1])),
        pair("0011/0110", periodic(&s, &[0, 0, 1, 1]), periodic(&s, &[0, 1, 1, 0])),
        pair("sampled/sampled", p, q),
        pair("sampled/zeros", r, zeros),
        pair("01-tail/10-tail", spike(&s, 0, &[1, 0, 1]), spike(&s, 1, &[0, 1, 0])),
    ];
    PanelSystem { id: "bernoulli".into(), description: "full 2-shift, uniform Bernoulli measure".into(), measure: m, pairs }
}

pub fn golden_mean_system() -> PanelSystem {
    let m = golden_mean_measure();
    let s = m.sft().clone();
    let zeros = periodic(&s, &[0]);
    let (p, q) = sampled_pair(&m, 201);
    let r = sampled_with(&m, 202, &zeros);
    let pairs = vec![
        pair("zeros/alternating", zeros.clone(), periodic(&s, &[0, 1])),
        pair("alternating/shifted", periodic(&s, &[0, 1]), periodic(&s, &[1, 0])),
        pair("zeros/spike@0", zeros.clone(), spike(&s, 0, &[1])),
        pair("zeros/spike@2", zeros.clone(), spike(&s, 0, &[0, 0, 1])),
        pair("001/010", periodic(&s, &[0, 0, 1]), periodic(&s, &[0, 1, 0])),
        pair("alternating/period3", periodic(&s, &[1, 0]), periodic(&s, &[1, 0, 0])),
        pair("0010/0100", periodic(&s, &[0, 0, 1, 0]), periodic(&s, &[0, 1, 0, 0])),
        pair("sampled/sampled", p, q),
        pair("sampled/zeros", r, zeros),
        pair("left-period3/spike@1", PointRep::eventually_periodic(&s, vec![0, 1, 0], vec![0], vec![0]).unwrap(), spike(&s, 0, &[0, 1])),
    ];
    PanelSystem {
        id: "golden_mean".into(),
        description: "golden-mean shift, Markov measure P = [[1/2,1/2],[1,0]]".into(),
        measure: m,
        pairs,
    }
}

pub fn four_cycle_system() -> PanelSystem {
    let m = four_cycle_measure();
    let s = m.sft().clone();
    let points: Vec<PointRep> = (0..4u8).map(|k| periodic(&s, &[k, (k + 1) % 4, (k + 2) % 4, (k + 3) % 4])).collect();
    let mut pairs = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            if i != j && pairs.len() < 10 {
                pairs.push(pair(&format!("orbit{i}/orbit{j}"), points[i].clone(), points[j].clone()));
            }
        }
    }
    PanelSystem { id: "four_cycle".into(), description: "periodic 4-cycle, uniform measure".into(), measure: m, pairs }
}

/// Bernoulli, golden mean and the 4-cycle, in that order.
pub fn acceptance_panel() -> Vec<PanelSystem> {
    vec![bernoulli_system(), golden_mean_system(), four_cycle_system()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panel_shape() {
        let panel = acceptance_panel();
        assert_eq!(panel.len(), 3);
        for sys in &panel {
            assert_eq!(sys.pairs.len(), 10, "{}", sys.id);
            let d = PAIR_DEPTH as i64;
            for p in &sys.pairs {
                assert_ne!(p.x.block(-d, d).unwrap(), p.y.block(-d, d).unwrap(), "{}", p.label);
            }
        }
        assert_eq!(panel[1].measure.stationary(), &[rat(2, 3), rat(1, 3)]);
        assert_eq!(panel, acceptance_panel());
    }
}
