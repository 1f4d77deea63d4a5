fn main() {
    std::process::exit(corona_cli::run(std::env::args_os()));
}
