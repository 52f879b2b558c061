use num_rational::BigRational;
use qeuler::{euler_poly, DirichletCharacter, EulerParams, QContext, Scalar};

fn main() {
    let ctx = QContext::exact(BigRational::new(1.into(), 2.into())).unwrap();
    let chi = DirichletCharacter::quadratic(3).unwrap();
    let params = EulerParams { h: 2, r: 1 };
    let x = BigRational::from_integer(1.into());
    let value = euler_poly(3, &x, &chi, params, &ctx).unwrap();
    match value {
        Scalar::Rational(v) => println!("E_3(1) = {}", v),
        other => println!("E_3(1) = {}", other.render(30)),
    }
}
