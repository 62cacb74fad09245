fn main() {
    std::process::exit(hkwall_cli::run(std::env::args_os()));
}
