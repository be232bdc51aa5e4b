//! The RM value shin^r[beta], its exact phase and the positive invariant samech.

use rmshin::cocycle::shin_rm;
use rmshin::modgroup::CharVec;
use rmshin::qfield::parse_quad;

fn main() -> rmshin::Result<()> {
    let prec = 160;
    for (r, beta) in [
        ("0,4/5", "sqrt(3)"),
        ("0,1/4", "sqrt(5)"),
        ("0,1/3", "(1+sqrt(13))/2"),
    ] {
        let v = shin_rm(&CharVec::parse(r)?, &parse_quad(beta)?, prec)?;
        println!("r = ({r}), beta = {beta}");
        println!("  shin   = {}", v.shin);
        match v.phase_exponent() {
            Some(p) => println!("  arg    = 2 pi ({p})"),
            None => println!("  arg    = {}", v.shin.arg()),
        }
        println!("  samech = {}", v.samech);
        println!("  A = {}, k = {}", v.a, v.k);
    }
    Ok(())
}
