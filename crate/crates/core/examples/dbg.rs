use num_complex::Complex64;
use parazero::parabolic::{classify_fixed_points, reference_row, seed_z_for, reproduce_table, SolveSettings};
use parazero::word::DegreeWord;

fn main() {
    for delta in 3..=9u32 {
        let row = reference_row(delta).unwrap();
        let word = DegreeWord::new(delta, row.letters.to_vec()).unwrap();
        let lam = Complex64::new(row.lambda_re, row.lambda_im);
        match seed_z_for(&word, lam, Complex64::new(1.0, 0.0), 53) {
            Ok(z) => {
                let r = classify_fixed_points(&word, lam, 53).unwrap();
                let n_bad = r.records.iter().filter(|rec| !rec.z.re.is_finite() || !rec.z.im.is_finite()).count();
                println!("delta {delta}: seed z = {z}, records {} (nonfinite {})", r.records.len(), n_bad);
                match reproduce_table(delta, &SolveSettings::default()) {
                    Ok(t) => println!("   solved lam={} |alpha|={}", t.solution.lambda_c64(), t.witness.alpha_min.norm()),
                    Err(e) => println!("   solve error: {e}"),
                }
            }
            Err(e) => println!("delta {delta}: seed error {e}"),
        }
    }
}
