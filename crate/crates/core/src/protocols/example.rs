use crate::algebra::PrimeField;
use crate::foasc::{
    Base, Codec, Construction, FoascInstance, LevelPoint, ReconCoeff, RingSpec, RingVec,
};

const Q1: [[(u64, u64); 2]; 9] = [
    [(1, 0), (1, 0)],
    [(1, 1), (1, 2)],
    [(1, 2), (1, 1)],
    [(2, 0), (0, 0)],
    [(2, 1), (0, 2)],
    [(2, 2), (0, 1)],
    [(0, 0), (2, 0)],
    [(0, 1), (2, 2)],
    [(0, 2), (2, 1)],
];

const Q2: [[(u64, u64); 2]; 9] = [
    [(0, 1), (0, 1)],
    [(0, 2), (0, 0)],
    [(0, 0), (0, 2)],
    [(1, 1), (2, 1)],
    [(1, 2), (2, 0)],
    [(1, 0), (2, 2)],
    [(2, 1), (1, 1)],
    [(2, 2), (1, 0)],
    [(2, 0), (1, 2)],
];

/// The two `9 x 2` arrays over `F_3^2`, as level points.
pub fn example_tables() -> [Vec<Vec<LevelPoint>>; 2] {
    let conv = |t: &[[(u64, u64); 2]; 9]| {
        t.iter()
            .map(|row| row.iter().map(|&(a, b)| LevelPoint(vec![a, b])).collect())
            .collect()
    };
    [conv(&Q1), conv(&Q2)]
}

/// Two-entry database over `F_3^2` with `alpha_1(a, b) = a`,
/// `alpha_2(a, b) = b` and `lambda = (2, 2)`.
#[derive(Debug, Clone)]
pub struct ExampleTwo {
    pub(crate) tables: [Vec<Vec<LevelPoint>>; 2],
    pub(crate) lambda: [u64; 2],
    level: Codec,
    ring: RingSpec,
    randomness: Codec,
}

impl ExampleTwo {
    pub(crate) fn with_lambda(lambda: [u64; 2]) -> Self {
        Self {
            tables: example_tables(),
            lambda,
            level: Codec::uniform(3, 2),
            ring: RingSpec::new(Base::Prime(PrimeField::new(3).expect("3 is prime")), 1),
            randomness: Codec::uniform(9, 1),
        }
    }
}

pub fn build_example() -> FoascInstance {
    FoascInstance::new(ExampleTwo::with_lambda([2, 2]))
}

impl Construction for ExampleTwo {
    fn protocol(&self) -> &'static str {
        "example"
    }
    fn n(&self) -> usize {
        2
    }
    fn k(&self) -> usize {
        2
    }
    fn t(&self) -> usize {
        1
    }
    fn level_codec(&self) -> &Codec {
        &self.level
    }
    fn ring(&self) -> &RingSpec {
        &self.ring
    }
    fn randomness(&self) -> &Codec {
        &self.randomness
    }
    fn row(&self, i: usize, ell: &[u64]) -> Vec<LevelPoint> {
        self.tables[i][ell[0] as usize].clone()
    }
    fn alpha(&self, tau: usize, z: &LevelPoint) -> RingVec {
        RingVec(vec![z.0[tau]])
    }
    fn recon(&self, _i: usize, _ell: &[u64]) -> ReconCoeff {
        ReconCoeff {
            lambda: self.lambda.iter().map(|&l| RingVec(vec![l])).collect(),
            omega: vec![1],
        }
    }
    fn public_params(&self) -> Vec<(String, String)> {
        vec![("lambda".into(), format!("{:?}", self.lambda))]
    }
    fn predicted_bits(&self) -> Option<f64> {
        Some(2.0 * 3.0 * 3f64.log2())
    }
}
