//! The Weddle locus of six general points of P^3 for quadric cones.

use geproci::field::FieldSpec;
use geproci::projgeom::ProjPoint;
use geproci::weddle::{random_point_on_line, weddle_degree, weddle_member, WeddleContext};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = FieldSpec::choose(&[], 1 << 30, 0)?.field;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let six: Vec<ProjPoint> = (0..6).map(|_| ProjPoint::random(f, 3, &mut rng)).collect();
    let ctx = WeddleContext::new(f, &six, 2, 1)?;
    println!("reduced matrix {:?}, generic rank {}", ctx.reduced_shape(), ctx.generic_rank());
    println!("degree of the locus: {:?}", weddle_degree(&ctx, 1)?);
    let on_line = random_point_on_line(f, &six[0], &six[1], &mut rng);
    let elsewhere = ProjPoint::random(f, 3, &mut rng);
    println!("point on a joining line is a member: {}", weddle_member(&ctx, &on_line)?);
    println!("random point is a member: {}", weddle_member(&ctx, &elsewhere)?);
    Ok(())
}
