//! Full pipeline for one case, written as a TOML certificate and read
//! back through the exact re-check.

use singcert::cases::{BuildOptions, CaseId};
use singcert::certificate::CertificateFile;
use singcert::cli::certify_case;

fn main() -> singcert::Result<()> {
    let case = std::env::args().nth(1).unwrap_or_else(|| "31".into());
    let id: CaseId = case.parse()?;
    let cert = certify_case(id.spec(), &BuildOptions::default())?;
    let file = CertificateFile::new(vec![cert]);
    let text = file.to_toml()?;

    let path = std::env::temp_dir().join(format!("singcert-{}.toml", id.label()));
    std::fs::write(&path, &text)?;
    println!("wrote {} ({} bytes)", path.display(), text.len());

    let back = CertificateFile::from_toml(&std::fs::read_to_string(&path)?)?;
    back.recheck()?;
    println!("re-checked; all proven: {}", back.all_proven());
    Ok(())
}
