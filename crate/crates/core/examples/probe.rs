use nalgebra::DMatrix;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn main() {
    for seed in [1u64, 2, 3, 5, 7, 9, 11, 13, 17, 19, 23, 29, 31, 37, 41, 42, 43, 47] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let randm = |rng: &mut ChaCha8Rng| {
            let a = DMatrix::from_fn(10, 10, |_, _| rng.gen_range(-1.0..1.0));
            &a * a.transpose() + DMatrix::identity(10, 10) * 10.0
        };
        let kd = randm(&mut rng);
        let md = randm(&mut rng);
        let basis = DMatrix::from_fn(10, 3, |_, _| rng.gen_range(-1.0..1.0));
        let ka = basis.transpose() * &kd * &basis;
        let ma = basis.transpose() * &md * &basis;
        let ka = (&ka + ka.transpose()) * 0.5;
        let ma = (&ma + ma.transpose()) * 0.5;
        let exact = eigencert_core::linalg::dense_generalized_eig_max(&ka, &ma).unwrap();
        let samples = 1_000_000usize;
        let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
        let mut best = f64::NEG_INFINITY;
        for s in 0..samples {
            let z = 1.0 - 2.0 * (s as f64 + 0.5) / samples as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = 2.0 * PI * (s as f64 / golden).fract();
            let c = nalgebra::Vector3::new(r * phi.cos(), r * phi.sin(), z);
            let num = (ka.clone() * c).dot(&c);
            let den = (ma.clone() * c).dot(&c);
            best = best.max(num / den);
        }
        println!("seed {seed}: exact {exact:.12} sweep {best:.12} gap {:.3e}", exact - best);
    }
}
