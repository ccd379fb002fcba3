use clap::Parser;

fn main() {
    let cli = match gvir_cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Help and version requests are not input errors.
            std::process::exit(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let code = gvir_cli::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
