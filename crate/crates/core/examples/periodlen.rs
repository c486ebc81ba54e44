// scratch: exercise randomized roundtrip with progress output
use lspectra::{CfExpansion, QuadSurd};
use std::time::Instant;

fn main() {
    let primes = [2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];
    let mut state = 0xDEADBEEFCAFEBABEu64;
    let mut next = move || { state ^= state << 13; state ^= state >> 7; state ^= state << 17; state };
    let mut count = 0;
    while count < 100 {
        let p = (next() % 2001) as i64 - 1000;
        let q = (next() % 2001) as i64 - 1000;
        if q == 0 { continue; }
        let d = primes[(next() % primes.len() as u64) as usize];
        let r = (next() % 1000) as i64 + 1;
        let x = QuadSurd::new_i64(p, q, d, r).unwrap();
        let t = Instant::now();
        match CfExpansion::expand(&x, 1_000_000) {
            Ok(e) => {
                let len = e.preperiod().len() + e.period().len();
                if t.elapsed().as_millis() > 500 {
                    println!("slow {}ms len {} for ({p}+{q}*sqrt({d}))/{r}", t.elapsed().as_millis(), len);
                }
                assert_eq!(e.value().unwrap(), x, "roundtrip {x}");
            }
            Err(err) => println!("FAILED ({p}+{q}*sqrt({d}))/{r}: {err}"),
        }
        count += 1;
        if count % 10 == 0 { println!("done {count}"); }
    }
    println!("all done");
}
