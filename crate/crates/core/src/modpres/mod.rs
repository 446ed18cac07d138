//! Finitely presented torsion modules and cut modules.

mod cut;
mod matrix;
mod minors;
mod smith;

pub use cut::{quotient_ses, CutIdeal, CutModule, Endpoint, ExactTriple};
pub use matrix::PresentationMatrix;
pub use minors::{fitting_f0, fitting_ideal};
pub use smith::{smith_form, smith_reduce, SmithForm};

use crate::error::Result;
use crate::scalar::ExpInt;

/// `M ≅ ⊕ V/(d_i)`, closed cuts at the elementary divisor valuations.
pub fn cyclic_decomposition<I: ExpInt>(a: &PresentationMatrix<I>) -> Result<CutModule<I>> {
    CutModule::new(smith_reduce(a)?.into_iter().map(CutIdeal::closed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_core::{Exponent, RingDescriptor};
    use num_bigint::BigInt;
    use std::sync::Arc;

    #[test]
    fn decomposition_examples() {
        let d = Arc::new(RingDescriptor::<BigInt>::char_p(2, Exponent::from_int(4)).unwrap());
        let parse = |rows: &[&[&str]]| {
            let rows: Vec<Vec<String>> = rows
                .iter()
                .map(|r| r.iter().map(|s| s.to_string()).collect())
                .collect();
            PresentationMatrix::parse(&d, &rows).unwrap()
        };
        let a = parse(&[&["1*t^(1)", "1*t^(1/2)"], &["1*t^(1/2)", "1*t^(1)"]]);
        let half = CutIdeal::closed(Exponent::frac(1, 2));
        assert_eq!(
            cyclic_decomposition(&a).unwrap(),
            CutModule::new([half.clone(), half]).unwrap()
        );
        assert!(cyclic_decomposition(&parse(&[&["1"]])).unwrap().is_zero());
    }
}
