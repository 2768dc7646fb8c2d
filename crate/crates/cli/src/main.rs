fn main() {
    std::process::exit(twistor_cli::run(std::env::args_os()));
}
