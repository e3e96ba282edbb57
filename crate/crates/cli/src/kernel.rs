//! Randomized checks of the Laurent-polynomial kernels against independent
//! evaluations in a prime field.

use num_rational::{BigRational, Ratio};
use rand::Rng;
use toric_wall::kring::{
    geometric_quotient, rational, root_of_unity_filter, specialize, KElement, SpecializationPoint,
    TPoly,
};

/// Exponent denominators used below all divide this.
const ROOT_ORDER: u64 = 60;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelCheck {
    pub name: &'static str,
    pub identity: &'static str,
    pub instances: usize,
    pub failures: usize,
}

fn random_coefficient<R: Rng>(rng: &mut R) -> BigRational {
    let n = rng.gen_range(-5..=5);
    let d = rng.gen_range(1..=4);
    rational(if n == 0 { 1 } else { n }, d)
}

fn random_element<R: Rng>(rng: &mut R, dim: usize, rational_exponents: bool) -> KElement {
    let mut x = KElement::zero(dim);
    for _ in 0..rng.gen_range(1..=4) {
        let exp: Vec<Ratio<i64>> = (0..dim)
            .map(|_| {
                let d = if rational_exponents {
                    [1, 2, 3, 4, 5, 6][rng.gen_range(0..6)]
                } else {
                    1
                };
                Ratio::new(rng.gen_range(-6..=6), d)
            })
            .collect();
        x = &x + &KElement::monomial(&exp, random_coefficient(rng));
    }
    x
}

fn random_point<R: Rng>(rng: &mut R, dim: usize) -> SpecializationPoint {
    SpecializationPoint::random(rng, dim, ROOT_ORDER, 40)
}

/// `filter(P, l, b)` at a point equals `(1/l) Σ_{ζ ∈ μ_l} P(ζ β)` with `β^l = b`.
fn filter_instance<R: Rng>(rng: &mut R) -> bool {
    let dim = rng.gen_range(1..=3);
    let l = [1i64, 2, 3, 4, 5, 6][rng.gen_range(0..6)];
    let mut p = TPoly::zero(dim);
    for _ in 0..rng.gen_range(1..=5) {
        p = &p + &TPoly::term(rng.gen_range(-8..=8), random_element(rng, dim, false));
    }
    let q: Vec<i64> = (0..dim).map(|_| rng.gen_range(-3..=3)).collect();
    let base = KElement::integral_monomial(&q);
    let s = random_point(rng, dim);
    let f = &s.field;
    let Ok(filtered) = root_of_unity_filter(&p, l, &base) else {
        return false;
    };
    let Ok(lhs) = specialize(&filtered, &s) else {
        return false;
    };
    let root: Vec<Ratio<i64>> = q.iter().map(|&x| Ratio::new(x, l)).collect();
    let beta = s
        .eval_monomial(&root, None)
        .expect("l divides the root order");
    let zeta_l = f.pow(s.zeta, ROOT_ORDER / l as u64);
    let mut sum = 0;
    for j in 0..l {
        let t = f.mul(f.pow(zeta_l, j as u64), beta);
        for (n, c) in p.coefficients() {
            let v = f.mul(specialize(c, &s).expect("integral"), f.pow_signed(t, n));
            sum = f.add(sum, v);
        }
    }
    lhs == f.mul(sum, f.inv(f.from_i64(l)).expect("l < p"))
}

/// `(1 - t^{-1}) Σ_{s<l} t^{-s} = 1 - t^{-l}`.
fn telescoping_instance<R: Rng>(rng: &mut R) -> bool {
    let dim = rng.gen_range(1..=3);
    let l = rng.gen_range(1..=12);
    let one = KElement::one(dim);
    let Ok(gq) = geometric_quotient(l, dim) else {
        return false;
    };
    let left = &(&TPoly::constant(one.clone()) + &TPoly::term(-1, -&one)) * &gq;
    let right = &TPoly::constant(one.clone()) + &TPoly::term(-l, -&one);
    left == right
}

/// Evaluation respects sums and products.
fn homomorphism_instance<R: Rng>(rng: &mut R) -> bool {
    let dim = rng.gen_range(1..=3);
    let a = random_element(rng, dim, true);
    let b = random_element(rng, dim, true);
    let s = random_point(rng, dim);
    let f = &s.field;
    let ev = |x: &KElement| specialize(x, &s);
    match (ev(&a), ev(&b), ev(&(&a + &b)), ev(&(&a * &b))) {
        (Ok(va), Ok(vb), Ok(sum), Ok(prod)) => sum == f.add(va, vb) && prod == f.mul(va, vb),
        _ => false,
    }
}

pub fn kernel_checks<R: Rng>(rng: &mut R, instances: usize) -> Vec<KernelCheck> {
    let mut run = |name, identity, f: &dyn Fn(&mut R) -> bool| KernelCheck {
        name,
        identity,
        instances,
        failures: (0..instances).filter(|_| !f(rng)).count(),
    };
    vec![
        run(
            "root-of-unity-filter",
            "filter(P, l, b) = (1/l) sum over l-th roots z of P(z b^(1/l))",
            &filter_instance,
        ),
        run(
            "geometric-quotient",
            "(1 - t^-1) (1 + t^-1 + ... + t^-(l-1)) = 1 - t^-l",
            &telescoping_instance,
        ),
        run(
            "specialize-homomorphism",
            "eval(a + b) = eval(a) + eval(b) and eval(a b) = eval(a) eval(b)",
            &homomorphism_instance,
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kernels_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for c in kernel_checks(&mut rng, 30) {
            assert_eq!(c.failures, 0, "{}", c.name);
        }
    }

    #[test]
    fn filter_check_detects_a_wrong_filter() {
        // dropping the substitution t^l = b must break the identity
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let dim = 1;
        let p = &TPoly::term(2, KElement::one(dim)) + &TPoly::term(0, KElement::one(dim));
        let base = KElement::integral_monomial(&[1]);
        let s = random_point(&mut rng, dim);
        let f = &s.field;
        let right = root_of_unity_filter(&p, 2, &base).unwrap();
        let wrong = root_of_unity_filter(&p, 2, &KElement::one(dim)).unwrap();
        let beta = s.eval_monomial(&[Ratio::new(1, 2)], None).unwrap();
        let avg = f.add(f.pow(beta, 2), 1);
        assert_eq!(specialize(&right, &s).unwrap(), avg);
        assert_ne!(specialize(&wrong, &s).unwrap(), avg);
    }
}
