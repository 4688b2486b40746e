//! Choose a prime that carries a primitive 12th root of unity and the golden ratio.

use geproci::field::{FieldSpec, Symbol};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let symbols = [Symbol::order("zeta", 12), Symbol::minpoly("phi", &[-1, -1, 1])];
    let spec = FieldSpec::choose(&symbols, 1 << 30, 7)?;
    let f = spec.field;
    let zeta = spec.get("zeta")?;
    let phi = spec.get("phi")?;
    println!("p = {}", spec.prime());
    println!("zeta = {} has order {:?}", zeta.residue(), f.order(zeta));
    let check = f.sub(f.sub(f.mul(phi, phi), phi), f.one());
    println!("phi = {}, phi^2 - phi - 1 = {}", phi.residue(), check.residue());
    Ok(())
}
