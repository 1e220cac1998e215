//! Words, their graphs and classes, and the Dyck path encoding.

use wigner_lab::words::{
    canonical_form, class_counts, classify, dyck_to_wigner, enumerate_dyck, wigner_to_dyck,
    word_graph, Sentence, Word,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w: Word = "7,3,7,9,7".parse()?;
    let g = word_graph(&w);
    println!(
        "{w}: canonical {}, weight {}, class {}",
        canonical_form(&w),
        w.weight(),
        classify(&w)
    );
    println!(
        "  {} vertices, {} edges, connected: {}",
        g.vertex_count(),
        g.edge_count(),
        g.is_connected()
    );
    for (e, c) in w.traversals() {
        println!("  edge {e} traversed {c}x");
    }

    println!("\nclass counts of closed words");
    for len in 1..=9 {
        let counts = class_counts(len)?;
        let row: Vec<String> = counts.iter().map(|(c, n)| format!("{c}={n}")).collect();
        println!("  length {len}: {}", row.join(" "));
    }

    println!("\nDyck paths of semilength 3 and their Wigner words");
    for path in enumerate_dyck(3)? {
        let word = dyck_to_wigner(&path);
        assert_eq!(wigner_to_dyck(&word)?, path);
        println!("  {path:<22} {word}");
    }

    let s = Sentence::new(vec!["1,2,1".parse()?, "3,4,3".parse()?, "2,5,2".parse()?]);
    println!("\nsentence edge components: {:?}", s.edge_components());
    Ok(())
}
