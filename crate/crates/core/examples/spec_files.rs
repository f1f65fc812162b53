//! Writing and reading system descriptions as JSON.
use bilinear_control::model::{builtin_corpus, parse_system, random_system, serialize_system};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let jd = builtin_corpus("planar_jd")?;
    let text = serialize_system(&jd).expect("bilinear systems serialize");
    println!("{text}");

    let back = parse_system(&text)?;
    assert_eq!(back.family(), jd.family());

    let custom = r#"{
        "n": 2,
        "kind": "bilinear",
        "name": "shear",
        "matrices": [[[0, 1], [0, 0]], [[0, 0], [1, 0]]]
    }"#;
    let shear = parse_system(custom)?;
    println!(
        "{} has {} fields in R^{}",
        shear.name(),
        shear.field_count(),
        shear.n()
    );

    let r = random_system(3, 2, 42)?;
    let r_back = parse_system(&serialize_system(&r).unwrap())?;
    println!(
        "{} round trips exactly: {}",
        r.name(),
        r_back.family() == r.family()
    );

    match parse_system(r#"{"n": 1, "kind": "bilinear", "matrices": [[[1, 2, 3]]]}"#) {
        Ok(_) => println!("unexpectedly parsed"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
