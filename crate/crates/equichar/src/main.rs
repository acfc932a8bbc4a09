fn main() {
    std::process::exit(equichar::run_cli());
}
