//! Human and TSV renderers. Exact forms always appear; decimals are
//! annotated approximations rendered at the configured digit count.

use std::path::Path;

use countq_core::algebraic_converse::ProbabilityDecomposition;
use countq_core::bits::BitString;
use countq_core::constructions::{ConstructionReport, GniReport};
use countq_core::exact_scalar::{Amplitude, ExactScalar};
use countq_core::gap_oracle::WitnessPredicate;

pub fn tsv(header: &[&str], record: &[String]) {
    debug_assert_eq!(header.len(), record.len());
    println!("{}", header.join("\t"));
    println!("{}", record.join("\t"));
}

pub fn decimal_or_na(s: &ExactScalar, digits: usize) -> String {
    s.to_decimal(digits).unwrap_or_else(|_| "n/a".into())
}

/// Accepting basis rendered with the witness register split from the flag
/// bits, e.g. `|00,1>`.
fn split_basis(report: &ConstructionReport) -> String {
    let bits = report.accepting_basis.to_string();
    let (y, flags) = bits.split_at(report.m);
    format!("|{y},{flags}>")
}

pub fn construction_report(
    report: &ConstructionReport,
    predicate_path: &Path,
    x: &BitString,
    pred: &WitnessPredicate,
    digits: usize,
    tsv_mode: bool,
) -> countq_core::Result<()> {
    let amp = &report.accepting_amplitude;
    let prob = &report.acceptance_probability;
    if tsv_mode {
        let (a, r, g) = report
            .gap_crosscheck
            .map(|gv| {
                (
                    gv.accept.to_string(),
                    gv.reject.to_string(),
                    gv.gap.to_string(),
                )
            })
            .unwrap_or_else(|| ("n/a".into(), "n/a".into(), "n/a".into()));
        tsv(
            &[
                "command",
                "variant",
                "predicate",
                "x",
                "n",
                "m",
                "p",
                "amplitude",
                "amplitude_dec",
                "probability",
                "probability_dec",
                "accept",
                "reject",
                "gap",
            ],
            &[
                "simulate".into(),
                report.variant.to_string(),
                predicate_path.display().to_string(),
                x.to_string(),
                pred.input_bits().to_string(),
                pred.witness_bits().to_string(),
                report.p.to_string(),
                amp.to_string(),
                decimal_or_na(amp, digits),
                prob.to_string(),
                decimal_or_na(prob, digits),
                a,
                r,
                g,
            ],
        );
    } else {
        println!("variant      {}", report.variant);
        println!("witness bits {}", report.m);
        println!("exponent p   {}", report.p);
        println!("accepting    {}", split_basis(report));
        println!(
            "amplitude    {} (~ {})",
            amp,
            decimal_or_na(amp, digits)
        );
        println!(
            "probability  {} (~ {})",
            prob,
            decimal_or_na(prob, digits)
        );
        match report.gap_crosscheck {
            Some(gv) => println!(
                "crosscheck   A={} R={} gap={} consistent",
                gv.accept, gv.reject, gv.gap
            ),
            None => println!("crosscheck   disabled"),
        }
    }
    Ok(())
}

pub fn probability_decomposition(dec: &ProbabilityDecomposition) {
    println!(
        "decomposition: probability = (1/{}^{}) * sum of {} terms",
        dec.d_squared,
        dec.t,
        dec.basis.len()
    );
    for (alpha, f) in dec.basis.iter().zip(&dec.coefficients) {
        println!("  coefficient {f} on basis element {alpha}");
    }
}

pub fn gni_report(
    gni: &GniReport,
    g1: &Path,
    g2: &Path,
    digits: usize,
    tsv_mode: bool,
) -> countq_core::Result<()> {
    let amp = &gni.report.accepting_amplitude;
    let prob = &gni.report.acceptance_probability;
    let verdict = if gni.isomorphic {
        "ISOMORPHIC"
    } else {
        "NON-ISOMORPHIC"
    };
    if tsv_mode {
        tsv(
            &[
                "command",
                "graph1",
                "graph2",
                "variant",
                "sizes_match",
                "iso_count",
                "aut_count",
                "verdict",
                "amplitude",
                "probability",
            ],
            &[
                "gni".into(),
                g1.display().to_string(),
                g2.display().to_string(),
                gni.report.variant.to_string(),
                gni.sizes_match.to_string(),
                gni.iso_count.to_string(),
                gni.aut_count.to_string(),
                verdict.into(),
                amp.to_string(),
                prob.to_string(),
            ],
        );
    } else {
        if gni.isomorphic {
            println!("ISOMORPHIC (amplitude = 0)");
        } else {
            println!("NON-ISOMORPHIC (amplitude != 0)");
        }
        println!(
            "amplitude    {} (~ {})",
            amp,
            decimal_or_na(amp, digits)
        );
        println!(
            "probability  {} (~ {})",
            prob,
            decimal_or_na(prob, digits)
        );
        if gni.sizes_match {
            println!(
                "permutation search: {} isomorphisms, {} automorphisms - verdict agrees",
                gni.iso_count, gni.aut_count
            );
        } else {
            println!("different vertex counts: trivially non-isomorphic");
        }
    }
    Ok(())
}
