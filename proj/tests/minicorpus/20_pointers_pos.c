void f(void)
{
    int x = 0;
    int *p = &x;
    (void)p;
}
