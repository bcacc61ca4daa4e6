//! Generated four-class gold corpus with class-distinctive surface patterns,
//! for exercising the classifiers without a scraped dictionary.
//!
//! * alphabetisms: 2-5 capital letters, dotted (`E.V.I.L`) or plain (`LMFAO`)
//! * reduplicatives: hyphenated echo pairs (`boo-boo`, `flip-flop`, `fancy-shmancy`)
//! * clippings: 3-5 letter head or tail truncations of a seed word
//! * blends: 3-5 letter head of one seed word merged with a 3-6 letter tail
//!   of another, so never shorter than 6

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::SlangClass;
use crate::corpus::GoldClassRecord;
use crate::error::{Error, Result};

pub const SEED_WORDS: &[&str] = &[
    "absolute",
    "accident",
    "adventure",
    "airplane",
    "alcohol",
    "ambulance",
    "apartment",
    "attitude",
    "avocado",
    "bachelor",
    "backpack",
    "balcony",
    "banana",
    "bathroom",
    "battery",
    "birthday",
    "blanket",
    "breakfast",
    "brother",
    "business",
    "cabinet",
    "calendar",
    "camera",
    "captain",
    "caramel",
    "carnival",
    "cellphone",
    "champagne",
    "chemistry",
    "chocolate",
    "cigarette",
    "cinema",
    "classroom",
    "computer",
    "concert",
    "condition",
    "cucumber",
    "dentist",
    "detective",
    "diamond",
    "dinosaur",
    "doctor",
    "dragon",
    "economy",
    "elephant",
    "emergency",
    "engineer",
    "envelope",
    "exercise",
    "fabulous",
    "festival",
    "football",
    "fraternity",
    "furniture",
    "galaxy",
    "garbage",
    "gasoline",
    "gentleman",
    "giraffe",
    "government",
    "grandmother",
    "hamburger",
    "helicopter",
    "hospital",
    "husband",
    "icecream",
    "internet",
    "jalapeno",
    "journalist",
    "kangaroo",
    "keyboard",
    "kitchen",
    "laboratory",
    "laundry",
    "lemonade",
    "library",
    "limousine",
    "magazine",
    "mansion",
    "marathon",
    "marijuana",
    "martini",
    "mattress",
    "medicine",
    "microphone",
    "monster",
    "mosquito",
    "motorcycle",
    "mountain",
    "mushroom",
    "musician",
    "neighbor",
    "newspaper",
    "notebook",
    "octopus",
    "orchestra",
    "pajamas",
    "pancake",
    "parachute",
    "pelican",
    "penguin",
    "pepperoni",
    "photograph",
    "pineapple",
    "pizzeria",
    "popcorn",
    "potato",
    "president",
    "professor",
    "pumpkin",
    "question",
    "raccoon",
    "restaurant",
    "saxophone",
    "sandwich",
    "scientist",
    "semester",
    "skeleton",
    "spaghetti",
    "squirrel",
    "stadium",
    "strawberry",
    "submarine",
    "sweater",
    "teacher",
    "telephone",
    "television",
    "tomato",
    "tornado",
    "tortilla",
    "umbrella",
    "university",
    "vacation",
    "vampire",
    "vegetable",
    "volcano",
    "waffle",
    "weekend",
    "whiskey",
    "window",
    "yesterday",
    "zombie",
];

const ONSETS: &[&str] = &[
    "b", "bl", "br", "ch", "d", "dr", "f", "fl", "g", "gr", "h", "j", "k", "l", "m", "n", "p", "pl", "r", "s", "sl",
    "sn", "t", "tw", "w", "z",
];
const NUCLEI: &[&str] = &["a", "e", "i", "o", "u", "oo", "ee", "ea"];
const CODAS: &[&str] = &[
    "", "b", "ck", "g", "ll", "m", "n", "p", "t", "tsy", "dle", "ngle", "gy", "pper", "zzle",
];
const VOWELS: [char; 5] = ['a', 'e', 'i', 'o', 'u'];

fn pick<'a>(rng: &mut ChaCha8Rng, xs: &[&'a str]) -> &'a str {
    xs.choose(rng).expect("non-empty list")
}

fn alphabetism(rng: &mut ChaCha8Rng) -> GoldClassRecord {
    let n = rng.gen_range(2..=5);
    let letters: Vec<String> = (0..n)
        .map(|_| char::from(rng.gen_range(b'A'..=b'Z')).to_string())
        .collect();
    let word = if rng.gen_bool(0.5) {
        letters.join(".")
    } else {
        letters.concat()
    };
    GoldClassRecord::new(word, SlangClass::Alphabetism)
}

fn reduplicative(rng: &mut ChaCha8Rng) -> GoldClassRecord {
    let onset = pick(rng, ONSETS);
    let nucleus = pick(rng, NUCLEI);
    let base = format!("{onset}{nucleus}{}", pick(rng, CODAS));
    let tail = &base[onset.len()..];
    let second = match rng.gen_range(0..4) {
        0 => base.clone(),
        1 => {
            // swap the first vowel for a different one
            let i = base.find(|c| VOWELS.contains(&c)).expect("nucleus has a vowel");
            let old = base.as_bytes()[i] as char;
            let new = *VOWELS
                .iter()
                .filter(|&&v| v != old)
                .collect::<Vec<_>>()
                .choose(rng)
                .unwrap();
            format!("{}{new}{}", &base[..i], &base[i + 1..])
        }
        2 => {
            // same-length onset so the halves align letter by letter
            let other = loop {
                let o = pick(rng, ONSETS);
                if o != onset && o.len() == onset.len() {
                    break o;
                }
            };
            format!("{other}{tail}")
        }
        _ => format!("shm{tail}"),
    };
    GoldClassRecord::new(format!("{base}-{second}"), SlangClass::Reduplicative)
}

fn clipping(rng: &mut ChaCha8Rng) -> GoldClassRecord {
    let src = pick(rng, SEED_WORDS);
    let k = rng.gen_range(3..=5).min(src.len() - 1);
    let word = if rng.gen_bool(0.75) {
        &src[..k]
    } else {
        &src[src.len() - k..]
    };
    GoldClassRecord::new(word, SlangClass::Clipping).with_components([src])
}

fn blend(rng: &mut ChaCha8Rng) -> GoldClassRecord {
    let (a, b) = loop {
        let a = pick(rng, SEED_WORDS);
        let b = pick(rng, SEED_WORDS);
        if a != b && a.len() >= 4 && b.len() >= 4 {
            break (a, b);
        }
    };
    let head = rng.gen_range(3..=(a.len() - 1).min(5));
    let tail = rng.gen_range(3..=(b.len() - 1).min(6));
    let word = format!("{}{}", &a[..head], &b[b.len() - tail..]);
    GoldClassRecord::new(word, SlangClass::Blend).with_components([a, b])
}

/// `n_per_class` unique words per class, grouped by class in `SlangClass::ALL`
/// order. Deterministic per seed.
pub fn generate_gold(n_per_class: usize, seed: u64) -> Result<Vec<GoldClassRecord>> {
    if n_per_class == 0 {
        return Err(Error::InvalidInput("n_per_class must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(4 * n_per_class);
    for class in SlangClass::ALL {
        let make: fn(&mut ChaCha8Rng) -> GoldClassRecord = match class {
            SlangClass::Alphabetism => alphabetism,
            SlangClass::Blend => blend,
            SlangClass::Clipping => clipping,
            SlangClass::Reduplicative => reduplicative,
        };
        let mut made = 0;
        let mut attempts = 0;
        while made < n_per_class {
            attempts += 1;
            if attempts > 1000 * n_per_class {
                return Err(Error::InvalidInput(format!(
                    "could not generate {n_per_class} unique {class} words"
                )));
            }
            let r = make(&mut rng);
            if seen.insert(r.word.to_lowercase()) {
                out.push(r);
                made += 1;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slangclass::patterns::{classify_clipping, classify_reduplicative, ClippingType, ReduplicativeType};

    #[test]
    fn shape_and_determinism() {
        let a = generate_gold(100, 5).unwrap();
        assert_eq!(a.len(), 400);
        assert_eq!(a, generate_gold(100, 5).unwrap());
        let uniq: BTreeSet<String> = a.iter().map(|r| r.word.to_lowercase()).collect();
        assert_eq!(uniq.len(), 400);
        for c in SlangClass::ALL {
            assert_eq!(a.iter().filter(|r| r.label == c).count(), 100);
        }
    }

    #[test]
    fn patterns_are_recognized() {
        for r in generate_gold(100, 11).unwrap() {
            match r.label {
                SlangClass::Reduplicative => {
                    assert_ne!(
                        classify_reduplicative(&r.word).unwrap(),
                        ReduplicativeType::Unk,
                        "{}",
                        r.word
                    )
                }
                SlangClass::Clipping => {
                    let src = &r.components.as_ref().unwrap()[0];
                    assert_ne!(classify_clipping(&r.word, src), ClippingType::Unknown);
                }
                SlangClass::Alphabetism => assert!(r.word.chars().all(|c| c.is_ascii_uppercase() || c == '.')),
                SlangClass::Blend => assert_eq!(r.components.as_ref().unwrap().len(), 2),
            }
        }
    }
}
