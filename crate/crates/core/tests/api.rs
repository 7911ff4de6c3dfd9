use std::fs::File;
use std::io::{BufReader, BufWriter, Write};

use divtop::betti::{betti_delta, betti_delta_tilde, parity_sums};
use divtop::complex::{
    build_delta_complex, build_divisor_multicomplex, homology_betti, multicomplex_betti,
    MulticomplexModel,
};
use divtop::number::{parse_big, primorial_dim, SummatoryTables};
use divtop::verify::{self, Suite, VerifyConfig};
use divtop::{Error, Tables};

#[test]
fn summatory_cache_survives_a_file() {
    let t = Tables::build(50_000).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ml.bin");
    {
        let mut w = BufWriter::new(File::create(&path).unwrap());
        t.summatory.write_cache(&mut w).unwrap();
        w.flush().unwrap();
    }
    let back = SummatoryTables::read_cache(BufReader::new(File::open(&path).unwrap())).unwrap();
    assert_eq!(back.limit(), 50_000);
    for n in [1, 2, 10, 9_999, 50_000] {
        assert_eq!(back.mertens(n).unwrap(), t.summatory.mertens(n).unwrap());
        assert_eq!(
            back.liouville(n).unwrap(),
            t.summatory.liouville(n).unwrap()
        );
    }
    let bytes = std::fs::read(&path).unwrap();
    let truncated = &bytes[..bytes.len() - 3];
    assert!(SummatoryTables::read_cache(truncated).is_err());
}

#[test]
fn formula_oracle_and_parity_agree_at_a_few_n() {
    let t = Tables::build(1500).unwrap();
    for n in [2u64, 30, 210, 1155, 1500] {
        let formula = betti_delta(n, &t.counters).unwrap();
        let oracle = homology_betti(&build_delta_complex(n, &t.sieve, 100_000).unwrap());
        assert_eq!(formula.values(), oracle.betti.values(), "n = {n}");
        let (a, b) = parity_sums(&formula);
        assert_eq!(b as i64 - a as i64, t.summatory.mertens(n).unwrap());
    }
}

#[test]
fn parsed_multicomplex_matches_builder() {
    let t = Tables::build(200).unwrap();
    let built = build_divisor_multicomplex(200, &t.sieve).unwrap();
    let parsed = MulticomplexModel::parse(&built.to_text()).unwrap();
    assert_eq!(parsed, built);
    let b = multicomplex_betti(&parsed, 100_000).unwrap();
    assert_eq!(b.values(), betti_delta_tilde(200, &t).unwrap().values());
}

#[test]
fn huge_dimension_and_range_errors() {
    assert_eq!(primorial_dim(&parse_big("10^80").unwrap()).unwrap(), 44);
    let t = Tables::build(100).unwrap();
    assert!(matches!(
        betti_delta(101, &t.counters),
        Err(Error::Range { n: 101, limit: 100 })
    ));
    assert!(verify::run_with(Suite::Shadow, &VerifyConfig::new(101), &t).is_err());
}
