//! Splice two closed words along a shared edge.
//!
//! cargo run --example merge -- 3,2,1,3 4,1,2,4

use wigner_lab::merge::{check_merge, find_shared_edge, merge_words};
use wigner_lab::words::Word;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let inner: Word = args.next().as_deref().unwrap_or("3,1,2,3").parse()?;
    let frame: Word = args.next().as_deref().unwrap_or("4,1,2,4").parse()?;

    let Some(shared) = find_shared_edge(&inner, &frame)? else {
        println!("{inner} and {frame} share no edge");
        return Ok(());
    };
    println!(
        "shared edge {} at position {} of the frame, orientation {}",
        shared.edge(),
        shared.pos_in_w2,
        if shared.same_orientation {
            "kept"
        } else {
            "reversed"
        }
    );
    let merged = merge_words(&inner, &frame)?;
    println!("{inner} into {frame} -> {merged}");
    println!("{:#?}", check_merge(&inner, &frame, &merged));
    Ok(())
}
