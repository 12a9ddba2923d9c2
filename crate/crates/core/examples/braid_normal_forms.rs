//! Garside normal forms in the braid group on three strands.

use horobound::group::garside_normal_form;

fn main() -> horobound::Result<()> {
    let words: [&[i32]; 5] = [&[1, 2, 1], &[2, 1, 2], &[1, 2, 2, 2, -1], &[-2, 1, 1, 1, 2], &[1, -1, 2, -2]];
    for w in words {
        let x = garside_normal_form(3, w)?;
        println!("{w:?} -> {x}   key {}", x.canonical_key().to_hex());
    }
    Ok(())
}
