//! The kernel integrals `F_{2k-1}(t)` exactly, and checked by quadrature.

use wpvol::kernel::{eval_d, eval_r, kernel_f, quad_check_f};
use wpvol::poly::format_pi_term;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for k in 1..=4 {
        let f = kernel_f(k);
        let terms: Vec<String> = f
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let t = 2 * (k - i as u32);
                let t_part = if t > 0 { format!(" t^{t}") } else { String::new() };
                format!("{}{t_part}", format_pi_term(c, i as u32))
            })
            .collect();
        println!("F_{}(t) = {}", 2 * k - 1, terms.join(" + "));
    }
    println!();
    println!("k  t  numeric              exact                rel.err");
    for k in 1..=4 {
        for t in [0.0, 1.0, 2.0] {
            let r = quad_check_f(k, t, 1e-6)?;
            println!("{k}  {t}  {:<20.12} {:<20.12} {:.1e}", r.numeric, r.exact, r.relative_error);
        }
    }
    println!();
    println!("D(0, 1, 2) = {:e}", eval_d(0.0, 1.0, 2.0));
    println!("R(3, 1, 0) - 3 = {:e}", eval_r(3.0, 1.0, 0.0) - 3.0);
    Ok(())
}
