//! Rademacher's Phi, the eta multiplier psi and the theta character chi_r.

use rmshin::characters::{chi_r, dedekind_sum, kappa, phi_rademacher, psi_eta};
use rmshin::modgroup::{CharVec, Mat2};
use rug::Integer;

fn main() -> rmshin::Result<()> {
    println!(
        "s(5, 7) = {}",
        dedekind_sum(&Integer::from(5), &Integer::from(7))?
    );

    let a = Mat2::parse("26,45,15,26")?;
    let r = CharVec::parse("0,4/5")?;
    println!("A = {a}");
    println!("Phi(A) = {}", phi_rademacher(&a)?);
    println!("psi(A) = {}", psi_eta(&a)?);
    println!("chi_r(A) = {} for r = {r}", chi_r(&r, &a)?);
    println!("kappa(A, r) = {}", kappa(&a, &r)?);
    Ok(())
}
