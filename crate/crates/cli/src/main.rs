fn main() {
    std::process::exit(loopeq_cli::run(std::env::args_os()));
}
