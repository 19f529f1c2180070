//! Seeded random fields for property checks and gauge inputs.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{neg_wave, FourierForm, Wave, ZERO_WAVE};
use crate::error::Result;
use crate::exterior::{Blade, CForm, Form, Rational};
use crate::g2_reps::G2Structure;

/// Random real field of the given degree on `count` random conjugate-paired modes.
pub fn random_real_field(seed: u64, degree: usize, bound: i32, count: usize) -> FourierForm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let waves: Vec<Wave> = (0..count).map(|_| std::array::from_fn(|_| rng.gen_range(-bound..=bound))).collect();
    random_real_on(&waves, seed ^ 0x5eed, degree, bound)
}

/// Random real field with coefficients uniform in the unit square on the given waves and their negatives.
pub fn random_real_on(waves: &[Wave], seed: u64, degree: usize, bound: i32) -> FourierForm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blades = Blade::of_grade(degree);
    let mut modes = Vec::new();
    for k in waves {
        let form = CForm::from_terms(
            blades.iter().map(|b| (*b, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))),
        );
        if *k == ZERO_WAVE {
            modes.push((*k, form.map(|z| Complex64::new(z.re, 0.0))));
        } else {
            modes.push((*k, form.clone()));
            modes.push((neg_wave(k), form.conj()));
        }
    }
    FourierForm::from_modes(degree, bound, modes, true).expect("waves within bound")
}

/// `dβ + c₁₄` with `β` a random real 1-form and `c₁₄` a random constant in `Λ²₁₄`,
/// so that `*(F∧ψ)` has zero mean.
pub fn random_closed_two_form(seed: u64, bound: i32, count: usize, g2: &G2Structure) -> Result<FourierForm> {
    let beta = random_real_field(seed, 1, bound, count);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc14);
    let c = Form::from_terms(
        Blade::of_grade(2).iter().map(|b| (*b, Rational::new(rng.gen_range(-9i64..=9).into(), 4.into()))),
    );
    let c14 = g2.decompose2(&c)?.pi14.to_complex();
    beta.d().add(&FourierForm::constant(&c14, bound)?)
}
