use citescore::cutoffs::CutoffTable;

fn main() {
    let table = CutoffTable::bundled();
    for year in 2011..=2020 {
        let (date, origin) = table.cutoff_for(year).unwrap();
        println!("CiteScore {year}: snapshot of {date} ({origin})");
    }

    let custom = CutoffTable::from_toml("default_month_day = \"06-30\"\n[years]\n2019 = \"2020-07-15\"\n").unwrap();
    println!("custom 2019: {:?}", custom.cutoff_for(2019).unwrap());
    println!("custom 2021: {:?}", custom.cutoff_for(2021).unwrap());
}
