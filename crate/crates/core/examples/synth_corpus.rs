//! Write a synthetic corpus to JSON Lines, read it back, and audit it.

use std::fs::File;
use std::io::BufReader;

use argjoint::model::{read_jsonl, write_jsonl, AnyInstance};
use argjoint::synth::{essay_corpus, CorpusSpec};
use argjoint::{check_gold_constraints, validate_instance, EssayInstance, Variant};

fn main() {
    let dir = std::env::temp_dir().join("argjoint-synth-example");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("essays.jsonl");

    let corpus = essay_corpus(
        &CorpusSpec {
            count: 350,
            n_min: 2,
            n_max: 6,
            epsilon: 0.4,
            seed: 2024,
        },
        Variant::Mod3,
    )
    .unwrap();
    write_jsonl(&corpus, File::create(&path).unwrap()).unwrap();

    let back: Vec<EssayInstance> = read_jsonl(BufReader::new(File::open(&path).unwrap())).unwrap();
    assert_eq!(back, corpus);
    let mut claims = 0;
    let mut relations = 0;
    for inst in &back {
        let any = AnyInstance::Essay(inst.clone());
        assert!(validate_instance(&any).is_empty());
        assert!(check_gold_constraints(&any).is_empty());
        claims += inst.gold.ctype.iter().filter(|c| **c == argjoint::ComponentType::Claim).count();
        relations += inst.gold.rel.iter().flatten().filter(|&&r| r).count();
    }
    let components: usize = back.iter().map(|i| i.n).sum();
    println!("{} paragraphs, {components} components, {claims} claims, {relations} relations", back.len());
    println!("written to {}", path.display());
}
