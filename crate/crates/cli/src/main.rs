fn main() {
    std::process::exit(fqlab_cli::run(std::env::args_os()));
}
