fn main() {
    use statrs::distribution::{Continuous, ContinuousCDF, Normal};
    let n = Normal::new(0.0, 1.0).unwrap();
    for q in [0.5, 0.975, 0.995, 0.01, 0.99] {
        let z0 = n.inverse_cdf(q);
        let z1 = z0 - (n.cdf(z0) - q) / n.pdf(z0);
        let z2 = z1 - (n.cdf(z1) - q) / n.pdf(z1);
        println!("q={q}: statrs={z0:.16} n1={z1:.16} n2={z2:.16}");
    }
    println!("ref 0.975=1.959963984540054 0.995=2.575829303548901");
}
