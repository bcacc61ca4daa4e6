use std::collections::BTreeMap;

use proptest::prelude::*;
use slanglex::morphology::{segment, train_segmenter, SegmenterModel, SegmenterParams};
use slanglex::phonology::{profile, Phoneme, Phonemizer, Position};

fn words(ws: &[&str]) -> Vec<String> {
    ws.iter().map(|s| s.to_string()).collect()
}

/// Phoneme shares counted over distinct word types, tallied by hand.
fn shares(ws: &[&str], ph: &Phonemizer) -> BTreeMap<Phoneme, f64> {
    let mut seen = std::collections::BTreeSet::new();
    let mut counts: BTreeMap<Phoneme, f64> = BTreeMap::new();
    let mut total = 0.0;
    for w in ws {
        if !seen.insert(w.trim().to_lowercase()) {
            continue;
        }
        for p in ph.convert(w).unwrap().phonemes {
            *counts.entry(p).or_default() += 1.0;
            total += 1.0;
        }
    }
    counts.values_mut().for_each(|c| *c /= total);
    counts
}

#[test]
fn odds_ratios_match_hand_tally() {
    let ph = Phonemizer::bundled();
    let slang = ["woody", "zorp", "Woody", "dank", "yeet"];
    let standard = ["water", "table", "cat", "dog", "house"];
    let s = 1e-6;
    let prof = profile(slang, standard, &ph, s, 0.05).unwrap();
    assert_eq!(prof.slang_types, 4);

    let (a, b) = (shares(&slang, &ph), shares(&standard, &ph));
    let mut want: Vec<(Phoneme, f64)> = a
        .keys()
        .chain(b.keys())
        .map(|p| {
            let x = a.get(p).copied().unwrap_or(0.0);
            let y = b.get(p).copied().unwrap_or(0.0);
            (*p, (x + s) / (y + s))
        })
        .collect::<BTreeMap<_, _>>()
        .into_iter()
        .collect();
    want.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.symbol().cmp(y.0.symbol())));

    assert_eq!(prof.odds.rows.len(), want.len());
    for (row, (p, r)) in prof.odds.rows.iter().zip(&want) {
        assert_eq!(row.phoneme, *p);
        assert!((row.ratio - r).abs() <= 1e-9 * r.max(1.0));
    }
    let positions: Vec<Position> = prof.manners.iter().map(|(p, _)| *p).collect();
    assert_eq!(positions, [Position::First, Position::Final]);
}

#[test]
fn profile_ignores_case_duplicates() {
    let ph = Phonemizer::bundled();
    let once = profile(["dank"], ["cat"], &ph, 1e-6, 0.05).unwrap();
    let many = profile(["dank", "DANK", " Dank "], ["cat", "Cat"], &ph, 1e-6, 0.05).unwrap();
    assert_eq!(once.odds, many.odds);
}

fn model(split_hyphens: bool) -> SegmenterModel {
    let ws = words(&[
        "flip-flop",
        "hip-hop",
        "flipflop",
        "hop",
        "flip",
        "walking",
        "talking",
        "walk",
    ]);
    train_segmenter(
        &ws,
        SegmenterParams {
            split_hyphens,
            ..Default::default()
        },
    )
    .unwrap()
}

proptest! {
    #[test]
    fn hyphens_stand_alone(word in "[a-z\\-]{1,24}") {
        let m = model(true);
        let s = segment(&m, &word);
        prop_assert_eq!(s.morphs.concat(), word.clone());
        for morph in &s.morphs {
            prop_assert!(morph == "-" || !morph.contains('-'), "morph {:?}", morph);
        }
        let hyphens = word.matches('-').count();
        prop_assert_eq!(s.morphs.iter().filter(|m| *m == "-").count(), hyphens);
    }

    #[test]
    fn kept_hyphens_still_concatenate(word in "\\PC{1,24}") {
        let s = segment(&model(false), &word);
        prop_assert_eq!(s.morphs.concat(), word);
    }
}

#[test]
fn hyphen_setting_survives_tsv() {
    for flag in [true, false] {
        let m = model(flag);
        let mut buf = Vec::new();
        m.write_tsv(&mut buf).unwrap();
        let back = SegmenterModel::read_tsv(buf.as_slice()).unwrap();
        assert_eq!(back.split_hyphens, flag);
        assert_eq!(segment(&back, "hip-flop").morphs, segment(&m, "hip-flop").morphs);
    }
}

#[test]
fn training_is_seed_deterministic() {
    let ws = words(&["unhappy", "happy", "unkind", "kind", "kindly", "happily"]);
    let p = SegmenterParams {
        seed: 11,
        ..Default::default()
    };
    assert_eq!(train_segmenter(&ws, p).unwrap(), train_segmenter(&ws, p).unwrap());
}
