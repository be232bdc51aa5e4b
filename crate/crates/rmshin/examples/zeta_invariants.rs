//! Tangedal's invariants U1, U2 and the partial zeta derivative Z'(0).

use rmshin::modgroup::CharVec;
use rmshin::qfield::parse_quad;
use rmshin::zeta::{determine_t, z_prime};

fn main() -> rmshin::Result<()> {
    let prec = 128;
    for (r, beta) in [
        ("0,4/5", "sqrt(3)"),
        ("0,1/4", "sqrt(5)"),
        ("0,1/3", "(1+sqrt(13))/2"),
    ] {
        let (r, beta) = (CharVec::parse(r)?, parse_quad(beta)?);
        let w = determine_t(&r, &beta)?;
        let z = z_prime(&r, &beta, None, prec)?;
        println!("r = {r}, beta = {beta}: t = {} ({})", w.t, w.method);
        println!("  U1 = {}", z.u1);
        println!("  U2 = {}", z.u2);
        println!(
            "  Z'(0) = {}, exp(n Z'(0)) = {}",
            z.zprime_inf2,
            z.exp_n_zprime()
        );
    }
    Ok(())
}
