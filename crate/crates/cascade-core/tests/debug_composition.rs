#[test]
fn debug_composition() {
    use cascade_core::basis::HermiteBasis;
    use cascade_core::symbols::{AngleTimeSymbol, HarmonicSeries};
    use cascade_core::quantization::{weyl_quantize_series, QuantizeOptions};

    let basis = HermiteBasis::new(256);
    let a = AngleTimeSymbol::sin_ntheta(2);
    let b = AngleTimeSymbol::cos_ntheta(2);
    let sa = HarmonicSeries::from_symbol(&a).unwrap();
    let sb = HarmonicSeries::from_symbol(&b).unwrap();
    let opts = QuantizeOptions::default();
    let ma = weyl_quantize_series(&sa, basis, opts).unwrap();
    let mb = weyl_quantize_series(&sb, basis, opts).unwrap();
    let bracket_sym = sa.poisson(&sb);
    let bracket = weyl_quantize_series(&bracket_sym, basis, opts).unwrap();
    let comm = ma.commutator_i(&mb);

    // band entries of A at a few k
    for k in [4usize, 16, 64, 128, 200] {
        println!("A[{},{}] = {:?}   B = {:?}", k+2, k, ma.entry(k+2,k), mb.entry(k+2,k));
    }
    for k in [4usize, 16, 64, 128, 200] {
        println!("comm diag[{k}] = {:?}  bracket diag = {:?}", comm.entry(k,k), bracket.entry(k,k));
        println!("comm band4[{},{}] = {:?}  bracket = {:?}", k+4, k, comm.entry(k+4,k), bracket.entry(k+4,k));
        println!("comm band2[{},{}] = {:?}  bracket = {:?}", k+2, k, comm.entry(k+2,k), bracket.entry(k+2,k));
    }
    // symbol values of the bracket on a grid
    for action in [0.3, 0.45, 0.6, 1.0] {
        println!("bracket symbol at theta=0.5, I={action}: {:?}", bracket_sym.evaluate(0.5, action));
    }
}
