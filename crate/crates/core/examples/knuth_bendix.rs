//! Knuth-Bendix completion: a confluent system for Z_2 * Z_3 and the
//! diagnostic for a presentation whose completion does not finish.

use horobound::group::{builtin_presentation, kb_complete, normal_form, GraphDescriptor, KbBounds};

fn main() -> horobound::Result<()> {
    for name in ["free_product:2,3", "zd:3", "one_relator_example"] {
        let p = builtin_presentation(&GraphDescriptor::parse(name)?)?;
        let rs = kb_complete(&p, KbBounds::default())?;
        println!("{name}: {} rules, {:?}", rs.rules().len(), rs.status());
        if rs.is_verified() {
            let w = p.alphabet().parse_word("abababbb")?;
            println!("  abababbb -> {}", p.alphabet().format_word(&normal_form(&rs, &w)));
        }
    }
    Ok(())
}
