mod common;

use common::oracle;
use num_rational::BigRational;
use transcert::ball::BallReal;
use transcert::digitstream::{keystream, random_table, xor_cipher, DigitError, DigitStream};
use transcert::expr::parse_expr;
use transcert::rootfind::isolate_real_roots;

fn exp_root_stream(base: u32) -> DigitStream {
    let h = parse_expr("e^x + x - 12").unwrap();
    let a = BigRational::from_integer(0.into());
    let b = BigRational::from_integer(10.into());
    let root = isolate_real_roots(&h, &a, &b, 64).unwrap().remove(0);
    DigitStream::new(h, root, base).unwrap()
}

#[test]
fn oracle_brackets_known_value() {
    let d = oracle::exp_root_digits(10, 20);
    assert_eq!(d, "27472787148009609405");
}

#[test]
fn fifty_decimal_digits_match_oracle() {
    let mut s = exp_root_stream(10);
    assert_eq!(s.integer_part().unwrap(), "2");
    assert_eq!(s.digits(50).unwrap(), oracle::exp_root_digits(10, 50));
}

#[test]
fn keystream_matches_oracle_hex() {
    let s = exp_root_stream(10);
    let key = keystream(&s, 32, 0).unwrap();
    assert_eq!(transcert::digitstream::to_hex(&key), oracle::exp_root_digits(16, 64));
}

#[test]
fn split_reads_concatenate() {
    let mut a = exp_root_stream(10);
    let first = a.digits(17).unwrap();
    let second = a.digits(23).unwrap();
    let whole = exp_root_stream(10).digits(40).unwrap();
    assert_eq!(format!("{first}{second}"), whole);
}

#[test]
fn hex_expands_to_binary() {
    let hex = exp_root_stream(16).digits(20).unwrap();
    let bin = exp_root_stream(2).digits(80).unwrap();
    let expanded: String = hex
        .chars()
        .map(|c| format!("{:04b}", c.to_digit(16).unwrap()))
        .collect();
    assert_eq!(expanded, bin);
}

#[test]
fn exact_half() {
    let half = BallReal::from_rational(&BigRational::new(1.into(), 2.into()), 64);
    let mut s = DigitStream::from_ball(half.clone(), 10).unwrap();
    assert_eq!(s.digits(4).unwrap(), "5000");
    let mut s = DigitStream::from_ball(half, 10).unwrap();
    let t = random_table(&mut s, 1, 1, 1).unwrap();
    assert_eq!(t.to_text(), "5");
}

#[test]
fn tables_are_deterministic() {
    let t1 = random_table(&mut exp_root_stream(10), 2, 5, 5).unwrap();
    let t2 = random_table(&mut exp_root_stream(10), 2, 5, 5).unwrap();
    assert_eq!(t1, t2);
    assert_eq!(t1.rows[0][0], "27472");
    assert_eq!(t1.rows.len(), 2);
    assert!(t1.rows.iter().all(|r| r.len() == 5 && r.iter().all(|c| c.len() == 5)));
    assert_eq!(t1.to_json()["rows"][0][0], "27472");
}

#[test]
fn keystream_offsets() {
    let s = exp_root_stream(10);
    let long = keystream(&s, 24, 0).unwrap();
    let shifted = keystream(&s, 16, 16).unwrap();
    assert_eq!(&long[8..], &shifted[..]);
    assert_eq!(keystream(&s, 24, 0).unwrap(), long);
}

#[test]
fn xor_vectors() {
    assert_eq!(xor_cipher(&[0x27], &[0x41]).unwrap(), vec![0x66]);
    let m = b"attack at dawn".to_vec();
    assert_eq!(xor_cipher(&[0; 14], &m).unwrap(), m);
    let k: Vec<u8> = (0..20).map(|i| (i * 37 + 11) as u8).collect();
    let c = xor_cipher(&k, &m).unwrap();
    assert_eq!(xor_cipher(&k, &c).unwrap(), m);
    assert_eq!(
        xor_cipher(&[1, 2], &m).unwrap_err(),
        DigitError::KeyTooShort { key: 2, message: 14 }
    );
}

#[test]
fn invalid_base() {
    let half = BallReal::from_i64(1, 64);
    assert_eq!(DigitStream::from_ball(half, 37).unwrap_err(), DigitError::InvalidBase(37));
}
