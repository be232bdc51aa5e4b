//! The double sine function and its quasi-periodicity.

use rmshin::special::{dsine, fmt_float, Cx};

fn main() -> rmshin::Result<()> {
    let prec = 128;
    let one = Cx::one(prec);
    let half = Cx::from_f64(prec, 0.5, 0.0);
    println!("S2(1/2; 1, 1) = {}", dsine(&half, &one, &one, prec)?);

    let w1 = Cx::from_f64(prec, 3f64.sqrt(), 0.0);
    let z = Cx::from_f64(prec, 0.4, 0.1);
    let s = dsine(&z, &w1, &one, prec)?;
    let shifted = dsine(&z.add(&w1), &w1, &one, prec)?;
    let sine = z.mul_real(&rmshin::special::pi(prec)).sin().scale_f64(2.0);
    let dev = shifted.mul(&sine).rel_diff(&s);
    println!("S2(z; sqrt 3, 1) = {s}");
    println!(
        "|S2(z + w1) 2 sin(pi z) / S2(z) - 1| = {}",
        fmt_float(&dev, 5)
    );
    Ok(())
}
