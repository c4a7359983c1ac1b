//! Seeded random instances; the same seed always gives the same bytes.

use ioselect::bench::instance_digest;
use ioselect::generator::{generate, GeneratorConfig, StateShape};
use ioselect::io::write_instance;

fn main() {
    let mut cfg = GeneratorConfig::new(6, 3, 2, 42);
    println!("{}", write_instance(&generate(&cfg).unwrap()).trim_end());

    for shape in [StateShape::Random, StateShape::Diagonal, StateShape::Irreducible] {
        cfg.shape = shape;
        let s = generate(&cfg).unwrap();
        let again = generate(&cfg).unwrap();
        assert_eq!(write_instance(&s), write_instance(&again));
        println!("{shape:?}: {} state edges, digest {}", s.a.len(), &instance_digest(&s)[..16]);
    }
}
